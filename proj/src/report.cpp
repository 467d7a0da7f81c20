#include "tagbench/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "tagbench/error.hpp"

namespace tagbench {

namespace {

std::string pct(const std::optional<Ratio>& r) { return r ? format_percent(*r) : "-"; }

template <typename F>
std::string count_or_dash(const EvalReport& r, F field) {
  return r.counts ? std::to_string(field(*r.counts)) : "-";
}

std::vector<std::vector<std::string>> rows_of(const std::vector<EvalReport>& reports) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"index", "scheme", "tagset_size", "ambiguity_pct", "ambiguous_acc_pct", "unknown_acc_pct",
                  "overall_acc_pct", "n_ambiguous", "n_unknown", "n_tokens"});
  for (const auto& r : reports) {
    rows.push_back({std::to_string(r.index), r.scheme_code, std::to_string(r.tagset_size), format_percent(r.ambiguity),
                    pct(r.ambiguous_accuracy), pct(r.unknown_accuracy), pct(r.overall_accuracy),
                    count_or_dash(r, [](const CategoryCounts& c) { return c.ambiguous_known; }),
                    count_or_dash(r, [](const CategoryCounts& c) { return c.unknown; }),
                    count_or_dash(r, [](const CategoryCounts& c) { return c.tokens; })});
  }
  return rows;
}

}  // namespace

std::string emit_report(const std::vector<EvalReport>& reports, ReportFormat format) {
  if (reports.empty()) throw UsageError("no reports to emit");
  std::ostringstream out;
  switch (format) {
    case ReportFormat::tsv: {
      for (const auto& row : rows_of(reports)) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
        out << '\n';
      }
      break;
    }
    case ReportFormat::pretty: {
      const auto rows = rows_of(reports);
      std::vector<std::size_t> width(rows[0].size(), 0);
      for (const auto& row : rows)
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
      out << "# ambiguity_pct counts every token with more than one candidate tag, unknown words included\n";
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out << "  ";
          if (i == 1)
            out << std::left << std::setw(static_cast<int>(width[i])) << row[i];
          else
            out << std::right << std::setw(static_cast<int>(width[i])) << row[i];
        }
        out << '\n';
      }
      break;
    }
    case ReportFormat::plot_points: {
      std::vector<const EvalReport*> order;
      for (const auto& r : reports) order.push_back(&r);
      std::stable_sort(order.begin(), order.end(), [](const EvalReport* a, const EvalReport* b) {
        if (a->tagset_size != b->tagset_size) return a->tagset_size > b->tagset_size;
        return a->index < b->index;
      });
      out << "tagset_size,accuracy_pct,index\n";
      for (const auto* r : order) out << r->tagset_size << ',' << pct(r->ambiguous_accuracy) << ',' << r->index << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace tagbench

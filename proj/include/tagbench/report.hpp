#pragma once

#include <string>
#include <vector>

#include "tagbench/experiment.hpp"

namespace tagbench {

enum class ReportFormat { tsv, pretty, plot_points };

/// TSV: header row then one row per report with columns
///   index scheme tagset_size ambiguity_pct ambiguous_acc_pct unknown_acc_pct
///   overall_acc_pct n_ambiguous n_unknown n_tokens
/// Percentages are rounded half-up to two decimals; missing values print "-".
/// plot_points: `tagset_size,accuracy_pct,index` CSV of the ambiguous-word
/// accuracy, largest tagset first, equal sizes kept in index order.
std::string emit_report(const std::vector<EvalReport>& reports, ReportFormat format);

}  // namespace tagbench

#include "tagbench/cli.hpp"

int main(int argc, char** argv) {
  return tagbench::cli::run(argc, argv);
}

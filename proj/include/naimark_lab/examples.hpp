// Numerical reproductions of the worked examples: two-ancilla-state
// reconstruction, the unsharp x/y/z trio, non-commuting extensions of a
// compatible pair, and the pairwise-compatible triple.

#pragma once

#include <string>
#include <vector>

namespace naimark_lab {

struct ExampleCheck {
  std::string example;  // "1".."4"
  std::string name;
  bool passed = false;
  std::string detail;   // expected vs computed
};

std::vector<ExampleCheck> run_example(int which);
/// Examples 1 to 4 in order.
std::vector<ExampleCheck> run_all_examples();

}  // namespace naimark_lab

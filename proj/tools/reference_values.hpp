#pragma once

// Reference normalised hopping norms ||H_h|| / tau for periodic L x L
// lattices, rounded to two significant figures.

#include <map>
#include <stdexcept>
#include <string>

namespace cli {

inline double reference_hopping_norm(int L) {
  static const std::map<int, double> table = {
      {4, 24},   {6, 56},   {8, 100},  {10, 160},  {12, 230},
      {14, 320}, {16, 410}, {18, 520}, {20, 650},  {22, 780},
      {24, 930}, {26, 1100}, {28, 1300}, {30, 1500}, {32, 1700}};
  const auto it = table.find(L);
  if (it == table.end()) {
    throw std::out_of_range("no reference hopping norm for L = " + std::to_string(L));
  }
  return it->second;
}

}  // namespace cli

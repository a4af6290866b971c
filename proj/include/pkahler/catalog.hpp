#pragma once

#include <string>
#include <vector>

#include "pkahler/nilmanifold.hpp"

namespace pkahler::catalog {

ManifoldSpec torus(int n);
// I_3: d phi3 = phi1 ^ phi2
ManifoldSpec iwasawa();
// dimension 2N+1, d phi_{2N+1} = sum_i phi_{2i-1} ^ phi_{2i}
ManifoldSpec eta_beta(int N);
// I_3 deformed by t: d phi3 = phi12 - t phi2 ^ bar2
ManifoldSpec i3_t(const GaussianRational& t);
// d phi3 = phi12 + (i/2)(phi1 ^ bar1 + 2 phi2 ^ bar2)
ManifoldSpec i3_1();
// n = 4, d phi3 = phi12 + phi1 ^ bar1 + phi2 ^ bar2, d phi4 = phi12
ManifoldSpec efv8();

// Looks up "torus 3", "torus:3", "iwasawa", "eta_beta 2", "i3_t 1/2", "i3_1", "efv8".
// Throws std::invalid_argument for unknown names.
ManifoldSpec by_name(const std::string& name);
bool is_catalog_name(const std::string& name);
std::vector<std::string> names();

}  // namespace pkahler::catalog

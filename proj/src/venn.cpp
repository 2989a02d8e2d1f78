#include <algorithm>

#include "fmwb/fmsets.hpp"

namespace fmwb {

VennChain venn_chain(int x_size, const std::vector<std::uint64_t>& subsets) {
  if (x_size < 0 || x_size > 64) throw InputError("X must have at most 64 elements");
  if (subsets.empty() || subsets.size() > 64) throw InputError("need between 1 and 64 subsets");
  const std::uint64_t universe = x_size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << x_size) - 1;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (subsets[i] & ~universe) throw InputError("subset " + std::to_string(i) + " leaves X");
    for (std::size_t j = 0; j < i; ++j)
      if (subsets[i] == subsets[j]) throw InputError("subsets " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
  }

  VennChain v;
  std::vector<std::uint64_t> signature(static_cast<std::size_t>(x_size));
  for (int x = 0; x < x_size; ++x)
    for (std::size_t n = 0; n < subsets.size(); ++n)
      if (subsets[n] >> x & 1) signature[static_cast<std::size_t>(x)] |= std::uint64_t{1} << n;
  v.signatures = signature;
  std::sort(v.signatures.begin(), v.signatures.end());
  v.signatures.erase(std::unique(v.signatures.begin(), v.signatures.end()), v.signatures.end());
  for (auto sig : v.signatures) {
    std::uint64_t cell = 0;
    for (int x = 0; x < x_size; ++x)
      if (signature[static_cast<std::size_t>(x)] == sig) cell |= std::uint64_t{1} << x;
    v.cells.push_back(cell);
  }

  // At each step take the least index splitting the current family and keep
  // the larger side, the members' side on a tie (the finite stand-in for the
  // infinite side).
  std::vector<std::uint64_t> current = v.signatures;
  while (current.size() > 1) {
    for (int m = 0; m < static_cast<int>(subsets.size()); ++m) {
      std::vector<std::uint64_t> in, out;
      for (auto sig : current) (sig >> m & 1 ? in : out).push_back(sig);
      if (in.empty() || out.empty()) continue;
      current = in.size() >= out.size() ? in : out;
      v.m_sequence.push_back(m);
      v.chain.push_back(current);
      break;
    }
  }

  for (int x = 0; x < x_size; ++x) {
    const auto sig = signature[static_cast<std::size_t>(x)];
    int level = 0;
    for (const auto& y : v.chain)
      if (std::binary_search(y.begin(), y.end(), sig)) ++level;
    v.level.push_back(level);
  }
  return v;
}

}  // namespace fmwb

// SPDX-License-Identifier: Apache-2.0
#include "hst/link/ptrs.hpp"

#include <stdexcept>

namespace hst::link {

PtrsLayout distributed_ptrs(const OfdmNumerology& num, int count) {
  const int m = num.subcarriers();
  if (count <= 0 || count > m) throw std::invalid_argument("bad PTRS count");
  PtrsLayout l{PtrsKind::kDistributed, {}};
  const int step = m / count;
  for (int i = 0; i < count; ++i) l.subcarriers.push_back(i * step + step / 2);
  return l;
}

PtrsLayout block_ptrs(const OfdmNumerology& num, int prbs) {
  const int width = prbs * kSubcarriersPerPrb;
  if (width <= 0 || width > num.subcarriers()) throw std::invalid_argument("bad block PTRS size");
  PtrsLayout l{PtrsKind::kBlock, {}};
  const int first = (num.subcarriers() - width) / 2;
  for (int i = 0; i < width; ++i) l.subcarriers.push_back(first + i);
  return l;
}

}  // namespace hst::link

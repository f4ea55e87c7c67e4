#include "driftbound/zeta.hpp"

#include <cmath>
#include <string>

#include "driftbound/errors.hpp"

namespace driftbound {

double zeta(double w) {
  if (!(w > 1.0)) throw DomainError("zeta(w) diverges for w ≤ 1 (w = " + std::to_string(w) + ")");
  if (std::isinf(w)) return 1.0;

  const double N = 32.0 + std::ceil(w);
  const auto last = static_cast<long>(N) - 1;

  double sum = 0.0;
  for (long i = last; i >= 1; --i) sum += std::pow(static_cast<double>(i), -w);

  const double Nw = std::pow(N, -w);
  double tail = N * Nw / (w - 1.0) + 0.5 * Nw;

  // B2/2!, B4/4!, B6/6! times the rising factorial (w)_{2k-1}.
  constexpr double kCoef[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0};
  double rising = w;  // (w)_1
  double power = Nw / N;  // N^{-w-1}
  for (int k = 0; k < 3; ++k) {
    tail += kCoef[k] * rising * power;
    rising *= (w + 2 * k + 1) * (w + 2 * k + 2);
    power /= N * N;
  }
  return sum + tail;
}

}  // namespace driftbound

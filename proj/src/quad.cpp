#include "pdexact/quad.hpp"

#include <functional>

namespace pdexact::quad {

Jet2 integrate_jet2(const std::function<Jet2(double)>& f, double a, double b,
                    const QuadConfig& cfg) {
  auto wrap = [&f](double s) {
    const Jet2 v = f(s);
    Jet j = Jet::constant(2, v.v);
    j.d(0) = v.d_t;
    j.d(1) = v.d_x;
    j.d2(0, 0) = v.d_tt;
    j.d2(0, 1) = v.d_tx;
    j.d2(1, 0) = v.d_tx;
    j.d2(1, 1) = v.d_xx;
    return j;
  };
  return to_jet2(integrate(wrap, a, b, cfg));
}

}  // namespace pdexact::quad

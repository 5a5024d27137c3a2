// Compares CFN2 and CFT on z^3 - 1 along the real line and writes both
// convergence planes as PPM images.

#include <cstdio>
#include <fstream>

#include "fracroot/fracroot.hpp"

int main() {
  using namespace fracroot;
  const FunctionModel cubic({{1.0, 3}, {-1.0, 0}}, {});
  PlaneConfig cfg;
  cfg.f = cubic;
  cfg.axis = PlaneAxis::RealLine;
  cfg.lo = -2.0;
  cfg.hi = 2.0;
  cfg.alpha_lo = 0.5;
  cfg.alpha_hi = 1.0;
  cfg.n_x0 = 160;
  cfg.n_alpha = 80;
  cfg.roots = {{1.0, 0.0}, {-0.5, 0.8660254037844386}, {-0.5, -0.8660254037844386}};

  for (MethodKind m : {MethodKind::CFN2, MethodKind::CFT}) {
    cfg.method = m;
    const PlaneResult r = generate_plane(cfg, 0);
    const std::string path = std::string("cubic_") + std::string(method_name(m)) + ".ppm";
    std::ofstream(path, std::ios::binary) << render_ppm(r, default_palette());
    std::printf("%-5s %6.2f%% converged  -> %s\n", std::string(method_name(m)).c_str(),
                r.percentage, path.c_str());
  }

  SolverConfig sc;
  sc.alpha = 0.8;
  const IterationTrace t = solve(MethodKind::CFT, cubic, {0.3, 0.9}, sc);
  std::printf("CFT alpha=0.8 from 0.3+0.9i: %.6f%+.6fi after %d iterations (%s)\n",
              t.final_iterate().real(), t.final_iterate().imag(), t.iterations,
              std::string(status_name(t.status)).c_str());
}

// Solves for the head yaw that gives each probe its target alpha, holding
// the scenario's tracks fixed. Prints every root by bisection.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <vector>

#include "gazecone/errors.hpp"
#include "gazecone/scenario.hpp"
#include "gazecone/simulator.hpp"

namespace {

using namespace gazecone;

constexpr double kDeg = 3.14159265358979323846 / 180.0;

double alpha_with_yaw(Scenario s, std::size_t human, double t, double yaw) {
  s.humans[human].head_yaw.kind = HeadYawProfile::Kind::keyframes;
  s.humans[human].head_yaw.keyframes = {{0.0, yaw}};
  const long frame = s.frame_at(t);
  return ground_truth(s, frame)[human].alpha;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    const Scenario s = resolve_scenario(argc > 1 ? argv[1] : "fig2");
    for (const auto& probe : s.probes) {
      const long frame = s.frame_at(probe.t);
      const auto truth = ground_truth(s, frame);
      std::printf("%s frame=%ld d_fwd=%.4f d_lat=%.4f alpha=%.6f", probe.name.c_str(), frame, truth[0].d_fwd,
                  truth[0].d_lat, truth[0].alpha);
      if (probe.has_targets) {
        std::printf(" target alpha=%.4f d_fwd=%.4f d_lat=%.4f", probe.target_alpha, probe.target_d_fwd,
                    probe.target_d_lat);
      }
      std::printf("\n");
      if (!probe.has_targets || probe.target_alpha <= 0.0) continue;
      const auto f = [&](double yaw_deg) { return alpha_with_yaw(s, 0, probe.t, yaw_deg * kDeg) - probe.target_alpha; };
      for (double a = -179.0; a < 179.0; a += 0.5) {
        const double fa = f(a);
        const double fb = f(a + 0.5);
        if ((fa < 0.0) == (fb < 0.0)) continue;
        double lo = a, hi = a + 0.5, flo = fa;
        for (int i = 0; i < 80; ++i) {
          const double mid = 0.5 * (lo + hi);
          const double fm = f(mid);
          if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        std::printf("  yaw_deg root %.6f\n", 0.5 * (lo + hi));
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

// Acceptance run: one line per criterion, exit status 1 if any fails.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "fracdiff/verify.hpp"

namespace {

struct Criterion {
  int id;
  const char* title;
  const char* suite;
  double seconds_limit;
};

const std::vector<Criterion> kCriteria{
    {1, "special-function identities", "identities", 1.0},
    {2, "Prabhakar kernel Laplace transforms", "lemma1", 30.0},
    {3, "damped Prabhakar kernel Laplace transforms", "lemma2", 20.0},
    {4, "Gaussian radial inverse Fourier pairs", "lemma3-gaussian", 10.0},
    {5, "Volterra solve vs resolvent representation", "lemma4", 10.0},
    {6, "memory kernel resolvent and Laplace identity", "theorem2-equivalence", 30.0},
    {7, "Green symbol series vs Talbot", "theorem1-oracle", 60.0},
    {8, "explicit, L1 and memory solvers agree", "cross-solver", 300.0},
    {9, "classical limit alpha -> 1", "classical-limit", 30.0},
    {10, "forcing kernel vs Talbot", "forcing", 20.0},
};

}  // namespace

int main() {
  int failures = 0;
  for (const auto& c : kCriteria) {
    bool ok = false;
    std::string line;
    try {
      const auto r = fracdiff::verify::run_suite(c.suite, true);
      const bool fast = r.seconds <= c.seconds_limit;
      ok = r.passed && fast;
      char buf[512];
      std::snprintf(buf, sizeof buf, "%s = %.3g (limit %.3g), %.2f s (limit %.0f s)%s", r.metric_name.c_str(),
                    r.metric, r.threshold, r.seconds, c.seconds_limit, fast ? "" : " TOO SLOW");
      line = buf;
      if (!r.detail.empty()) line += " | " + r.detail;
    } catch (const std::exception& e) {
      line = std::string("error: ") + e.what();
    }
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s: %s\n", ok ? "PASS" : "FAIL", c.id, c.title, line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(kCriteria.size()) - failures, kCriteria.size());
  return failures == 0 ? 0 : 1;
}

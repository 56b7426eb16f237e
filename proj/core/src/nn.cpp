#include "dynlabel/nn.hpp"

#include <algorithm>

namespace dynlabel::nn {

GradCheckResult gradient_check(
    ParamStore<double>& store, const std::vector<double>& analytic,
    const std::function<std::pair<double, uint64_t>()>& eval, double h) {
  GradCheckResult res;
  auto [base_loss, base_sig] = eval();
  (void)base_loss;
  double* p = store.values();
  for (size_t i = 0; i < store.size(); ++i) {
    double saved = p[i];
    p[i] = saved + h;
    auto [lp, sig_p] = eval();
    p[i] = saved - h;
    auto [lm, sig_m] = eval();
    p[i] = saved;
    if (sig_p != base_sig || sig_m != base_sig) {
      ++res.skipped;
      continue;
    }
    double fd = (lp - lm) / (2.0 * h);
    double a = analytic[i];
    double rel = std::abs(fd - a) / std::max({std::abs(fd), std::abs(a), 1.0});
    res.max_rel_err = std::max(res.max_rel_err, rel);
    ++res.checked;
  }
  return res;
}

}  // namespace dynlabel::nn

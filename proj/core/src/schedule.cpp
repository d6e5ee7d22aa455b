#include "kamreduce/schedule.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "kamreduce/error.hpp"

namespace kam {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::vector<std::string> schedule_violations(const ScheduleParams& p, int n) {
  std::vector<std::string> v;
  const double tau = p.tau.value_or(default_tau(n, p.beta));
  if (!(p.beta > 0.0 && p.beta < 1.0)) {
    v.push_back("0 < beta < 1 violated (beta = " + num(p.beta) + ")");
  }
  if (!(p.ell >= 2.0 * n - 1.0 + p.beta)) {
    v.push_back("ell >= 2n - 1 + beta violated (ell = " + num(p.ell) + ", bound = " +
                num(2.0 * n - 1.0 + p.beta) + ")");
  }
  if (!(tau > n - 1.0 && tau < n - 1.0 + p.beta / 4.0)) {
    v.push_back("n - 1 < tau < n - 1 + beta/4 violated (tau = " + num(tau) + ")");
  }
  const double rho_max = p.beta / (4.0 * (2.0 * n - 1.0) + 3.0 * p.beta);
  if (!(p.rho > 0.0 && p.rho < rho_max)) {
    v.push_back("0 < rho < beta/(4(2n-1) + 3 beta) violated (rho = " + num(p.rho) +
                ", bound = " + num(rho_max) + ")");
  }
  if (!(p.eps0 > 0.0 && p.eps0 < 1.0)) {
    v.push_back("0 < eps0 < 1 violated (eps0 = " + num(p.eps0) + ")");
  }
  if (!(p.gamma0 > 0.0)) v.push_back("gamma0 > 0 violated");
  return v;
}

Schedule make_schedule(const ScheduleParams& p, int n, int max_steps) {
  if (auto v = schedule_violations(p, n); !v.empty()) {
    std::string msg = "schedule parameter window: ";
    for (std::size_t i = 0; i < v.size(); ++i) msg += (i ? "; " : "") + v[i];
    throw ScheduleError(msg);
  }
  Schedule s;
  s.params = p;
  s.n = n;
  s.tau = p.tau.value_or(default_tau(n, p.beta));
  if (p.eps0 >= p.eps_star) {
    s.warnings.push_back("eps0 >= eps_star ceiling (" + num(p.eps0) + " >= " +
                         num(p.eps_star) + ")");
  }
  const double log_eps0 = std::log(p.eps0);
  auto eps_at = [&](int m) { return std::exp(std::pow(1.0 + p.rho, m) * log_eps0); };
  auto s_at = [&](int m) { return std::pow(eps_at(m + 1), 1.0 / p.ell); };
  const double tiny = std::numeric_limits<double>::min();
  for (int m = 0; m < max_steps; ++m) {
    const double em = eps_at(m);
    const double sm = s_at(m), sm1 = s_at(m + 1);
    if (em < tiny || sm1 <= 0.0) break;
    const double s1 = 0.25 * (sm + 3.0 * sm1);
    if (!(sm - s1 > 0.0)) break;
    s.eps.push_back(em);
    s.s.push_back(sm);
    s.sigma.push_back(2.0 * sm);
    s.s1.push_back(s1);
    s.s2.push_back(0.25 * (2.0 * sm + 2.0 * sm1));
    s.s3.push_back(0.25 * (3.0 * sm + sm1));
    s.K.push_back(std::log(1.0 / em) / (sm - s1));
    s.gamma.push_back(p.gamma0 / std::ldexp(1.0, m));
  }
  if (s.eps.empty()) throw ScheduleError("schedule is empty: eps0 underflows");
  return s;
}

}  // namespace kam

// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eulerwave/eulerwave.hpp"

using namespace eulerwave;

namespace {

constexpr double kOrderLo = 1.7;
constexpr double kOrderHi = 2.3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Log {
 public:
  void fail(const std::string& what) {
    pass_ = false;
    failures_.push_back(what);
  }
  void note(const std::string& what) { notes_.push_back(what); }
  void require(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }

  Outcome outcome() const {
    std::string d;
    for (const auto& n : notes_) d += "\n      " + n;
    for (const auto& f : failures_) d += "\n      FAILED: " + f;
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<BurgersWave> waves(const GasParams& gas, std::vector<BurgersProfile> profiles) {
  std::vector<BurgersWave> out;
  for (auto& p : profiles) out.push_back(make_wave(gas, std::move(p)));
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EULERWAVE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string scenario(const std::string& name) {
  return std::string(EULERWAVE_SCENARIOS) + "/" + name + ".json";
}

// 1. Maximal wave counts for the five adiabatic indices in two and three dimensions.
Outcome ac1() {
  Log log;
  struct Cell {
    double gamma;
    int dim;
    int expected;
  };
  const Cell cells[] = {{1.4, 2, 2}, {1.4, 3, 3},       {5.0 / 3.0, 2, 2}, {5.0 / 3.0, 3, 4},
                        {1.8, 2, 2}, {1.8, 3, 3},       {2.0, 2, 3},       {2.0, 3, 3},
                        {2.5, 2, 2}, {2.5, 3, 2}};
  int matched = 0;
  for (const auto& c : cells) {
    const int got = max_wave_count(make_gas(c.gamma), c.dim);
    if (got == c.expected) {
      ++matched;
    } else {
      log.fail(fmt("gamma %.6g d=%d: got %d, expected %d", c.gamma, c.dim, got, c.expected));
    }
  }
  log.note(fmt("%d/10 cells match", matched));
  return log.outcome();
}

// 2. Gram constraint over a sweep of gamma, dimension and wave count.
Outcome ac2() {
  Log log;
  std::vector<double> gammas = {1.4, 5.0 / 3.0, 1.8, 2.0, 2.5, 1.6666666667};
  for (int i = 1; i < 200; ++i) gammas.push_back(1.0 + 0.01 * i);
  std::size_t sets = 0;
  double worst = 0.0;
  const auto sweep = [&]<int Dim>(double gamma) {
    const auto gas = make_gas(gamma);
    for (int n = 1; n <= max_wave_count(gas, Dim); ++n) {
      const double r = gram_residual(build_directions<Dim>(gas, n));
      ++sets;
      worst = std::max(worst, r);
      if (!(r < 1e-10)) log.fail(fmt("gamma %.10g d=%d N=%d: gram residual %.3g", gamma, Dim, n, r));
    }
  };
  for (double g : gammas) {
    sweep.operator()<2>(g);
    sweep.operator()<3>(g);
  }
  log.note(fmt("%zu sets, worst gram residual %.3g", sets, worst));

  const auto tri = build_directions<2>(make_gas(2.0), 3);
  const auto tet = build_directions<3>(make_gas(5.0 / 3.0), 4);
  Vec<2> s2 = Vec<2>::Zero();
  for (const auto& v : tri.vectors()) s2 += v;
  Vec<3> s3 = Vec<3>::Zero();
  for (const auto& v : tet.vectors()) s3 += v;
  log.note(fmt("|sum v| gamma=2 d=2: %.3g, gamma=5/3 d=3: %.3g", s2.norm(), s3.norm()));
  log.require(s2.norm() < 1e-12, "maximal set at gamma=2, d=2 does not sum to zero");
  log.require(s3.norm() < 1e-12, "maximal set at gamma=5/3, d=3 does not sum to zero");
  return log.outcome();
}

// 3. Burgers solver against the linear closed form and the PDE residual order.
Outcome ac3() {
  Log log;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> gamma_d(1.05, 2.95);
  std::uniform_real_distribution<double> s_d(-10.0, 10.0);
  std::uniform_real_distribution<double> t_d(0.0, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto gas = make_gas(gamma_d(rng));
    const auto w = make_wave(gas, LinearProfile{1.0, 0.0});
    const double s = s_d(rng);
    const double t = t_d(rng);
    const double err = std::abs(w.eval(s, t).f - s / (1.0 + (1.0 + gas.a()) * t));
    worst = std::max(worst, err);
  }
  log.note(fmt("linear profile: worst |f - s/(1+(1+a)t)| over 1000 samples = %.3g", worst));
  log.require(worst < 1e-12, "linear closed form mismatch");

  const auto gas = make_gas(1.4);
  const std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};
  const auto study = [&](const char* name, const BurgersProfile& p) {
    const auto w = make_wave(gas, p);
    const double t = 0.5 * w.breaking_time();
    std::vector<double> res;
    for (double h : steps) {
      double m = 0.0;
      for (int i = 0; i <= 40; ++i) m = std::max(m, pde_residual(w, -3.0 + 0.15 * i, t, h));
      res.push_back(m);
    }
    const double o1 = observed_order(res[0], res[1]);
    const double o2 = observed_order(res[1], res[2]);
    log.note(fmt("%s: residuals %.3g %.3g %.3g, orders %.3f %.3f", name, res[0], res[1], res[2], o1,
                 o2));
    log.require(decays_at_order(res, kOrderLo, kOrderHi), std::string(name) + " order out of range");
  };
  study("sine", SineProfile{0.5, 1.0, 1.0});
  study("gaussian", GaussianBumpProfile{0.8, 0.3, 1.0, 1.0});
  return log.outcome();
}

struct Case4 {
  std::string name;
  std::function<std::vector<ResidualReport>(const std::vector<double>&)> run;
};

template <int Dim>
Case4 make_case(std::string name, ExactField<Dim> ef) {
  return {std::move(name), [ef = std::move(ef)](const std::vector<double>& steps) {
            const double t = 1.0;
            const auto pts = sample_points<Dim>(ef, Vec<Dim>::Constant(-3.0), Vec<Dim>::Constant(3.0),
                                                t, steps.front(), 100, 0);
            return residual_study(ef, pts, t, steps);
          }};
}

// 4. Residuals of the assembled fields under step refinement.
Outcome ac4() {
  Log log;
  const std::vector<double> steps = {1e-2, 5e-3, 2.5e-3};
  std::vector<Case4> cases;

  {
    const auto g = make_gas(1.4);
    const auto ds = build_directions<3>(g, 3);
    cases.push_back(make_case<3>("gamma=1.4 N=3 d=3 gaussian",
        assemble<3>(g, ds, waves(g, {GaussianBumpProfile{0.3, 0, 2.5, 2}, GaussianBumpProfile{0.25, 0.5, 2, 2},
                                     GaussianBumpProfile{-0.2, -0.5, 3, 2}}))));
    cases.push_back(make_case<3>("gamma=1.4 N=3 d=3 sine",
        assemble<3>(g, ds, waves(g, {SineProfile{0.2, 0.5, 2}, SineProfile{0.15, 0.4, 1.8},
                                     SineProfile{-0.1, 0.6, 2.2}}))));
    cases.push_back(make_case<3>("gamma=1.4 N=3 d=3 mixed",
        assemble<3>(g, ds, waves(g, {LinearProfile{0.05, 2}, SineProfile{0.2, 0.5, 2},
                                     GaussianBumpProfile{0.3, 0, 2.5, 2}}))));
  }
  {
    const auto g = make_gas(5.0 / 3.0);
    const auto ds = build_directions<3>(g, 4);
    cases.push_back(make_case<3>("gamma=5/3 N=4 d=3 gaussian",
        assemble<3>(g, ds, waves(g, {GaussianBumpProfile{0.3, 0, 2.5, 1.5}, GaussianBumpProfile{0.25, 0.5, 2, 1.5},
                                     GaussianBumpProfile{-0.2, -0.5, 3, 1.5}, GaussianBumpProfile{0.2, 0, 2, 1.5}}))));
    cases.push_back(make_case<3>("gamma=5/3 N=4 d=3 sine",
        assemble<3>(g, ds, waves(g, {SineProfile{0.2, 0.5, 1.5}, SineProfile{0.15, 0.4, 1.5},
                                     SineProfile{-0.1, 0.6, 1.5}, SineProfile{0.1, 0.3, 1.5}}))));
    cases.push_back(make_case<3>("gamma=5/3 N=4 d=3 mixed",
        assemble<3>(g, ds, waves(g, {LinearProfile{-0.05, 1.5}, SineProfile{0.2, 0.5, 1.5},
                                     GaussianBumpProfile{0.3, 0, 2.5, 1.5}, ConstantProfile{1.5}}))));
  }
  {
    const auto g = make_gas(2.0);
    const auto ds = build_directions<2>(g, 3);
    cases.push_back(make_case<2>("gamma=2 N=3 d=2 gaussian",
        assemble<2>(g, ds, waves(g, {GaussianBumpProfile{0.3, 0, 2.5, 1}, GaussianBumpProfile{0.25, 0.5, 2, 1},
                                     GaussianBumpProfile{-0.2, -0.5, 3, 1}}))));
    cases.push_back(make_case<2>("gamma=2 N=3 d=2 sine",
        assemble<2>(g, ds, waves(g, {SineProfile{0.2, 0.5, 1}, SineProfile{0.15, 0.4, 1},
                                     SineProfile{-0.1, 0.6, 1}}))));
    cases.push_back(make_case<2>("gamma=2 N=3 d=2 mixed",
        assemble<2>(g, ds, waves(g, {LinearProfile{0.05, 1}, SineProfile{0.2, 0.5, 1},
                                     GaussianBumpProfile{0.3, 0, 2.5, 1}}))));
  }
  {
    const auto g = make_gas(2.5);
    const auto ds = build_directions<3>(g, 2);
    const Vec<3> perp = *transverse_direction(ds);
    cases.push_back(make_case<3>("gamma=2.5 N=2 d=3 transverse gaussian",
        assemble<3>(g, ds, waves(g, {SineProfile{0.2, 0.5, 2}, ConstantProfile{0}}),
                    Transverse<3>{1, GaussianBumpProfile{0.2, 0, 2.5, 0}, perp})));
    cases.push_back(make_case<3>("gamma=2.5 N=2 d=3 transverse sine",
        assemble<3>(g, ds, waves(g, {GaussianBumpProfile{0.3, 0, 2.5, 2}, ConstantProfile{0}}),
                    Transverse<3>{1, SineProfile{0.1, 0.5, 0}, perp})));
    cases.push_back(make_case<3>("gamma=2.5 N=2 d=3 transverse linear",
        assemble<3>(g, ds, waves(g, {SineProfile{0.15, 0.4, 2}, ConstantProfile{0}}),
                    Transverse<3>{1, LinearProfile{0.05, 0}, perp})));
  }

  for (const auto& c : cases) {
    const auto r = c.run(steps);
    std::vector<double> mom;
    std::vector<double> con;
    std::vector<double> sym;
    for (const auto& x : r) {
      mom.push_back(x.max_momentum_residual);
      con.push_back(x.max_continuity_residual);
      sym.push_back(x.max_symmetric_residual);
    }
    const bool orders = decays_at_order(mom, kOrderLo, kOrderHi) &&
                        decays_at_order(con, kOrderLo, kOrderHi) &&
                        decays_at_order(sym, kOrderLo, kOrderHi);
    const double finest = std::max({mom.back(), con.back(), sym.back()});
    const bool ok = orders && finest < 1e-5;
    log.note(fmt("%-40s %s  momentum %.2e->%.2e (order %.2f)  continuity %.2e->%.2e (order %.2f)  "
                 "symmetric %.2e->%.2e (order %.2f)",
                 c.name.c_str(), ok ? "ok  " : "FAIL", mom.front(), mom.back(),
                 observed_order(mom[1], mom[2]), con.front(), con.back(),
                 observed_order(con[1], con[2]), sym.front(), sym.back(),
                 observed_order(sym[1], sym[2])));
    if (!orders) log.fail(c.name + ": order outside [1.7, 2.3]");
    if (!(finest < 1e-5)) log.fail(c.name + fmt(": residual at h=2.5e-3 is %.3g", finest));
  }

  // Negative control: rotate the third direction so that v2 . v3 is off by 0.01.
  {
    const auto g = make_gas(1.4);
    auto v = build_directions<3>(g, 3).vectors();
    const Vec<3> axis = v[1].cross(v[2]).normalized();
    const double angle = 0.01 / std::sin(std::acos(v[1].dot(v[2])));
    v[2] = Eigen::AngleAxisd(-angle, axis) * v[2];
    const auto ds = DirectionSet<3>::from_vectors(g.a(), v);
    const auto c = make_case<3>("negative control",
        assemble<3>(g, ds, waves(g, {GaussianBumpProfile{0.3, 0, 2.5, 2}, GaussianBumpProfile{0.25, 0.5, 2, 2},
                                     GaussianBumpProfile{-0.2, -0.5, 3, 2}})));
    const auto r = c.run(steps);
    double lowest = kInfinity;
    for (const auto& x : r) {
      lowest = std::min({lowest, std::max(x.max_momentum_residual, x.max_continuity_residual),
                         x.max_symmetric_residual});
    }
    log.note(fmt("negative control: gram residual %.4g, smallest residual over all h %.3g",
                 gram_residual(ds), lowest));
    log.require(lowest > 1e-4, "negative control residual fell to " + fmt("%.3g", lowest));
  }
  return log.outcome();
}

// 5. Finite-volume convergence against the exact field and mass conservation.
Outcome ac5() {
  Log log;
  const auto g = make_gas(1.4);
  const auto ef = assemble<2>(g, build_directions<2>(g, 2),
                              waves(g, {GaussianBumpProfile{1.0, 0.0, 1.0, 2.0},
                                        GaussianBumpProfile{0.8, 0.5, 1.2, 2.0}}));
  const double t = 0.5 * ef.t_max();
  std::vector<double> err;
  for (int n : {64, 128, 256}) {
    const fv::FvGrid grid{n, n, Vec<2>(-5, -5), Vec<2>(5, 5)};
    err.push_back(fv::l1_error(fv::run_until(fv::init_from_exact(ef, grid), t), ef)[0]);
  }
  const double o1 = observed_order(err[0], err[1]);
  const double o2 = observed_order(err[1], err[2]);
  log.note(fmt("t = %.6g, L1(rho) %.4g %.4g %.4g, orders %.3f %.3f", t, err[0], err[1], err[2], o1, o2));
  log.require(o1 >= 0.7 && o1 <= 1.3 && o2 >= 0.7 && o2 <= 1.3, "finite-volume order outside [0.7, 1.3]");

  const fv::FvGrid grid{100, 100, Vec<2>(-10, -10), Vec<2>(10, 10)};
  auto st = fv::init_from_function(g, grid, [](const Vec<2>& x) {
    return fv::Conserved{1.0 + 0.2 * std::exp(-x.squaredNorm()), 0.0, 0.0};
  });
  const double before = fv::totals(st)[0];
  double drift = 0.0;
  bool interior = true;
  st = fv::run_until(st, 2.0, [&](const fv::FvState& s) {
    drift = std::max(drift, std::abs(fv::totals(s)[0] - before) / before);
    for (int k = 0; k < 100; ++k) {
      for (const auto& [i, j] : {std::pair{k, 0}, std::pair{k, 99}, std::pair{0, k}, std::pair{99, k}}) {
        if (std::abs(s.at(i, j)[0] - 1.0) > 1e-12) interior = false;
      }
    }
  });
  log.note(fmt("interior pulse: %zu steps, max relative mass drift %.3g", st.steps, drift));
  log.require(interior, "pulse reached the boundary");
  log.require(drift < 1e-10, "mass drift too large");
  return log.outcome();
}

// 6. Density jump mismatch across a shock in the first wave.
Outcome ac6() {
  Log log;
  const auto g = make_gas(1.4);
  const auto ds = build_directions<3>(g, 3);
  const ShockJump shock{2.0, 1.0, riemann_shock(g.a(), 2.0, 1.0)};
  const auto m = jump_mismatch_demo<3>(g, ds, shock, 1.0, {0.5, 0.75, 1.0, 1.25, 1.5});
  std::ostringstream os;
  for (double x : m.mismatch) os << ' ' << x;
  log.note("sigma = " + fmt("%.6g", shock.sigma) + ", mismatch" + os.str());
  log.note(fmt("spread %.6g", m.spread()));
  log.require(m.spread() > 1e-6, "mismatch does not vary with f2");
  return log.outcome();
}

// 7. Breaking-time guard and the sine breaking time.
Outcome ac7() {
  Log log;
  int code = run_cli("field " + scenario("past_breaking"));
  log.note(fmt("field past breaking: exit %d", code));
  log.require(code == 4, "field past breaking did not exit 4");
  code = run_cli("fv " + scenario("past_breaking") + " --grids 16 --t-end 1.0");
  log.note(fmt("fv past breaking: exit %d", code));
  log.require(code == 4, "fv past breaking did not exit 4");
  code = run_cli("fv " + scenario("past_breaking") + " --grids 16 --t-end 0.8333333333333334");
  log.note(fmt("fv at the breaking time: exit %d", code));
  log.require(code == 4, "fv at the breaking time did not exit 4");

  const auto g = make_gas(1.4);
  const auto ef = assemble<2>(g, build_directions<2>(g, 2),
                              waves(g, {SineProfile{1.0, 1.0, 2.0}, ConstantProfile{1.0}}));
  bool threw = false;
  try {
    (void)ef.sample(Vec<2>::Zero(), ef.t_max());
  } catch (const BreakingTimeError&) {
    threw = true;
  }
  log.require(threw, "field evaluation at t_max did not refuse");

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> gamma_d(1.05, 2.95);
  std::uniform_real_distribution<double> amp_d(-3.0, 3.0);
  std::uniform_real_distribution<double> k_d(0.1, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto gas = make_gas(gamma_d(rng));
    const double A = amp_d(rng);
    const double kappa = k_d(rng);
    const double expected = 1.0 / ((1.0 + gas.a()) * std::abs(A) * kappa);
    const double got = make_wave(gas, SineProfile{A, kappa, 0.0}).breaking_time();
    worst = std::max(worst, std::abs(got - expected) / expected);
  }
  log.note(fmt("sine breaking time: worst relative error %.3g over 200 draws", worst));
  log.require(worst < 1e-12, "sine breaking time mismatch");
  return log.outcome();
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget_s;
    Outcome (*fn)();
  };
  const Criterion criteria[] = {
      {1, "maximal wave count table", 1.0, ac1},
      {2, "Gram constraint of constructed sets", 1.0, ac2},
      {3, "Burgers characteristics oracle", 5.0, ac3},
      {4, "exact solutions satisfy the Euler equations", 60.0, ac4},
      {5, "finite-volume cross-validation", 300.0, ac5},
      {6, "jump condition mismatch", 1.0, ac6},
      {7, "breaking-time guard", 1.0, ac7},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("\n      FAILED: exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt("\n      FAILED: took %.2f s, budget %.0f s", secs, c.budget_s);
    }
    if (!o.pass) ++failed;
    std::printf("AC%d %s  %s (%.2f s)%s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 7 criteria passed\n", 7 - failed);
  return failed == 0 ? 0 : 1;
}

// Scaling benchmark: adversarial formula families, median timings of both
// substitution engines, CSV output and log-log slope fits.
//
// Benchmark formulas nest thousands of levels deep; build, substitute and
// destroy them on a with_deep_stack thread.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgl/church.hpp"
#include "dgl/onepass.hpp"
#include "dgl/syntax.hpp"
#include "dgl/usubst.hpp"

namespace dgl {

struct Family {
  USubst sigma;
  Formula formula;
};

/// seq: <x:=x+1; ...; x:=x+1>p(x); binder: \exists x1 ... \exists xn p(x1);
/// loop: n nested loops around x:=x+1 under a diamond. All use p(.) ~> .>=0.
inline Family gen_family(const std::string& name, int n) {
  if (n < 1) throw std::invalid_argument("family size must be positive");
  USubst sigma;
  sigma.add(Symbol::predicate("p", 1), Formula::geq(Term::dot(), Term::number(0)));
  const Variable x("x");
  Formula px = Formula::pred(Symbol::predicate("p", 1), Term::var(x));
  Game step = Game::assign(x, Term::plus(Term::var(x), Term::number(1)));
  if (name == "seq") {
    Game g = step;
    for (int i = 1; i < n; ++i) g = Game::seq(step, g);
    return {sigma, Formula::diamond(g, px)};
  }
  if (name == "binder") {
    Formula f = Formula::pred(Symbol::predicate("p", 1), Term::var("x1"));
    for (int i = n; i >= 1; --i) f = Formula::exists(Variable("x" + std::to_string(i)), f);
    return {sigma, f};
  }
  if (name == "loop") {
    Game g = step;
    for (int i = 0; i < n; ++i) g = Game::loop(g);
    return {sigma, Formula::diamond(g, px)};
  }
  throw std::invalid_argument("unknown family " + name);
}

struct BenchRecord {
  std::string family;
  int n = 0;
  std::size_t nodes_in = 0;
  std::size_t nodes_out = 0;
  std::string engine;
  long long median_ns = 0;
  bool clash = false;
};

inline const char* kCsvHeader = "family,n,nodes_in,nodes_out,engine,median_ns,clash";

inline std::string to_csv(const BenchRecord& r) {
  std::ostringstream os;
  os << r.family << ',' << r.n << ',' << r.nodes_in << ',' << r.nodes_out << ',' << r.engine << ',' << r.median_ns
     << ',' << (r.clash ? 1 : 0);
  return os.str();
}

inline std::vector<BenchRecord> parse_csv(const std::string& text) {
  std::vector<BenchRecord> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header: " + line);
      header = false;
      continue;
    }
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols.size() != 7) throw std::runtime_error("malformed CSV row: " + line);
    BenchRecord r;
    r.family = cols[0];
    r.n = std::stoi(cols[1]);
    r.nodes_in = std::stoull(cols[2]);
    r.nodes_out = std::stoull(cols[3]);
    r.engine = cols[4];
    r.median_ns = std::stoll(cols[5]);
    r.clash = cols[6] == "1";
    out.push_back(r);
  }
  return out;
}

/// Median wall time of `reps` runs after one discarded warmup run.
template <class F>
long long median_ns(F&& run, int reps) {
  run();
  std::vector<long long> times;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    run();
    auto t1 = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

/// Times one engine ("onepass" or "church") on one family instance.
inline BenchRecord bench_one(const std::string& family, int n, const std::string& engine, int reps = 5) {
  Family fam = gen_family(family, n);
  BenchRecord r{family, n, fam.formula.size(), 0, engine, 0, false};
  std::optional<Result<Formula>> last;
  auto run = [&] {
    last.reset();
    if (engine == "onepass")
      last.emplace(us(fam.sigma, fam.formula));
    else if (engine == "church")
      last.emplace(church_formula(fam.sigma, fam.formula));
    else
      throw std::invalid_argument("unknown engine " + engine);
  };
  r.median_ns = median_ns(run, reps);
  r.clash = !last->ok();
  r.nodes_out = r.clash ? 0 : last->value().size();
  return r;
}

struct SlopeFit {
  double slope = 0;
  double r2 = 0;
  std::size_t points = 0;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit of log(y) against log(x). Needs at least 6 points
/// spanning at least two decades of x.
inline SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 6) throw InsufficientData("need at least 6 points, got " + std::to_string(xy.size()));
  double lo = xy.front().first, hi = lo;
  for (const auto& [x, y] : xy) {
    if (x <= 0 || y <= 0) throw InsufficientData("sizes and times must be positive");
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (hi < 100 * lo) throw InsufficientData("sizes span less than two decades");
  double n = static_cast<double>(xy.size()), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : xy) {
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  SlopeFit f;
  f.points = xy.size();
  f.slope = cxy / vx;
  f.r2 = vy == 0 ? 1.0 : (cxy * cxy) / (vx * vy);
  return f;
}

/// Slope of median time against output node count for one family/engine.
inline SlopeFit fit_slope(const std::vector<BenchRecord>& records, const std::string& family, const std::string& engine) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& r : records)
    if (r.family == family && r.engine == engine && !r.clash)
      xy.emplace_back(static_cast<double>(r.nodes_out), static_cast<double>(std::max(1LL, r.median_ns)));
  return fit_loglog(xy);
}

}  // namespace dgl

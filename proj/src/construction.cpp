#include "lorentz/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include <json.hpp>

namespace lorentz {

namespace {

double tail_norm(const Eigen::ArrayXd& y, Index m, const Exponents& e) {
  // the quasi-norm sees only the value multiset, so a tail slice suffices
  if (m >= y.size()) return 0.0;
  return quasi_norm_raw(y.tail(y.size() - m), e);
}

double c_value(int k, Index n, const Exponents& e) {
  double wmax = std::max(1.0, power_weight(n, e.q / e.p - 1.0));
  return 1.0 / (static_cast<double>(k) * static_cast<double>(n) * wmax);
}

double min_nonzero_abs(const Eigen::ArrayXd& v) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) best = std::min(best, std::abs(v[i]));
  return std::isfinite(best) ? best : 0.0;
}

// eps_{k+1} = 0.9 * min{ b_k, c_k^{1/q}, a(n_k), n_k^{-1/p} }; shared by the
// planner and the builder so both sides see bitwise-identical values.
double next_epsilon(double b, double c, double a_at_n, Index n, const Exponents& e) {
  double cap = std::min(std::min(b, std::pow(c, 1.0 / e.q)),
                        std::min(a_at_n, std::pow(static_cast<double>(n), -1.0 / e.p)));
  return 0.9 * cap;
}

}  // namespace

Window Window::from_seq(const Seq& s) {
  Window w;
  if (s.is_zero()) {
    w.start = 1;
    return w;
  }
  Index lo = s.support_min(), hi = s.length();
  w.start = lo;
  w.values = s.values().segment(lo - 1, hi - lo + 1);
  return w;
}

Seq Window::to_seq() const {
  if (empty()) return Seq();
  Eigen::ArrayXd v = Eigen::ArrayXd::Zero(last());
  v.segment(start - 1, values.size()) = values;
  return Seq(std::move(v));
}

double Window::at(Index j) const {
  if (j < start || j >= start + values.size()) return 0.0;
  return values[j - start];
}

BlockSubspaceSpec BlockSubspaceSpec::dyadic_blocks() {
  BlockSubspaceSpec spec;
  spec.description = "dyadic blocks 1 on {2^k..2^{k+1}-1}";
  spec.max_index = 60;  // keeps block ends within Index range
  spec.generator = [](int k) {
    if (k < 1 || k > 60) throw std::domain_error("dyadic_blocks: index out of range");
    Index lo = Index(1) << k;
    return Window{lo, Eigen::ArrayXd::Ones(lo)};
  };
  return spec;
}

BlockSubspaceSpec BlockSubspaceSpec::geometric_tails(double ratio, Index stride) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::domain_error("geometric_tails: ratio must be in (0,1)");
  if (stride < 1) throw std::domain_error("geometric_tails: stride must be >= 1");
  BlockSubspaceSpec spec;
  spec.description = "geometric tails ratio " + std::to_string(ratio);
  spec.generator = [ratio, stride](int k) {
    if (k < 1) throw std::domain_error("geometric_tails: index out of range");
    Index len = 1;
    double v = ratio;
    while (v >= 1e-280) {
      v *= ratio;
      ++len;
    }
    Eigen::ArrayXd vals(len);
    double x = 1.0;
    for (Index i = 0; i < len; ++i, x *= ratio) vals[i] = x;
    return Window{(static_cast<Index>(k) - 1) * stride + 1, std::move(vals)};
  };
  return spec;
}

BlockSubspaceSpec BlockSubspaceSpec::explicit_blocks(std::vector<Seq> blocks, std::string desc) {
  auto stored = std::make_shared<std::vector<Seq>>(std::move(blocks));
  BlockSubspaceSpec spec;
  spec.description = std::move(desc);
  spec.max_index = static_cast<int>(stored->size());
  spec.generator = [stored](int k) {
    if (k < 1 || k > static_cast<int>(stored->size()))
      throw std::domain_error("explicit_blocks: index out of range");
    return Window::from_seq((*stored)[k - 1]);
  };
  return spec;
}

BlockSubspaceSpec BlockSubspaceSpec::demo_blocks(Index first_len, double rho, int count) {
  if (first_len < 1) throw std::domain_error("demo_blocks: first_len must be >= 1");
  if (!(rho > 1.0)) throw std::domain_error("demo_blocks: rho must be > 1");
  BlockSubspaceSpec spec;
  std::ostringstream oss;
  oss << "demo tiling blocks first_len=" << first_len << " rho=" << rho;
  spec.description = oss.str();
  spec.max_index = count;
  spec.generator = [first_len, rho, count](int k) {
    if (k < 1 || k > count) throw std::domain_error("demo_blocks: index out of range");
    Index end = first_len;
    Index start = 1;
    for (int i = 2; i <= k; ++i) {
      start = end + 1;
      Index width = std::max<Index>(1, static_cast<Index>(std::ceil((rho - 1.0) * static_cast<double>(end))));
      end += width;
    }
    return Window{start, Eigen::ArrayXd::Ones(end - start + 1)};
  };
  return spec;
}

AtildeSpec AtildeSpec::geometric(const Exponents& e, double target_norm) {
  if (!(target_norm > 0.0 && target_norm <= 1.0))
    throw std::domain_error("AtildeSpec::geometric: target norm must be in (0,1]");
  const double lp = std::log(2.0) / e.p;
  // norm of j -> 2^{-j/p} by direct summation until underflow
  long double acc = 0.0L;
  if (e.q_finite()) {
    const double s = e.q / e.p - 1.0;
    for (Index j = 1; j < 100000; ++j) {
      double term = std::exp(s * std::log(static_cast<double>(j)) - e.q * lp * static_cast<double>(j));
      if (term == 0.0 && j > 1) break;
      acc += term;
    }
    acc = std::pow(static_cast<long double>(acc), 1.0L / e.q);
  } else {
    for (Index j = 1; j < 100000; ++j) {
      double v = std::exp(std::log(static_cast<double>(j)) / e.p - lp * static_cast<double>(j));
      if (v == 0.0 && j > 1) break;
      acc = std::max<long double>(acc, v);
    }
  }
  double zeta = target_norm / static_cast<double>(acc);
  AtildeSpec sp;
  sp.norm = target_norm;
  sp.description = "geometric zeta*2^{-j/p}, zeta=" + std::to_string(zeta);
  sp.value = [zeta, lp](Index j) {
    if (j < 1) throw std::domain_error("atilde: index must be >= 1");
    return zeta * std::exp(-lp * static_cast<double>(j));
  };
  return sp;
}

AtildeSpec AtildeSpec::staircase(const Exponents& e,
                                 std::vector<std::pair<Index, double>> steps) {
  if (steps.empty()) throw std::domain_error("AtildeSpec::staircase: no steps");
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].second <= 0.0)
      throw std::domain_error("AtildeSpec::staircase: levels must be positive");
    if (i > 0 && (steps[i].first <= steps[i - 1].first || steps[i].second > steps[i - 1].second))
      throw std::domain_error("AtildeSpec::staircase: steps must increase, levels not increase");
  }
  if (!e.q_finite()) throw std::domain_error("AtildeSpec::staircase: requires q < inf");

  const double lp = std::log(2.0) / e.p;
  const double s = e.q / e.p - 1.0;
  long double acc = 0.0L;
  Index j = 1;
  for (const auto& [end, level] : steps) {
    const long double lq = std::pow(static_cast<long double>(level), static_cast<long double>(e.q));
    for (; j <= end; ++j) acc += lq * static_cast<long double>(power_weight(j, s));
  }
  const Index tail_from = steps.back().first;
  const double tail_level = steps.back().second;
  for (Index i = 1; i < 100000; ++i) {
    double v = tail_level * std::exp(-lp * static_cast<double>(i));
    double term = std::pow(v, e.q) * power_weight(tail_from + i, s);
    if (term == 0.0) break;
    acc += term;
  }

  auto shared = std::make_shared<std::vector<std::pair<Index, double>>>(std::move(steps));
  AtildeSpec sp;
  sp.norm = static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(e.q)));
  sp.description = "staircase with " + std::to_string(shared->size()) + " levels";
  sp.value = [shared, lp](Index jj) {
    if (jj < 1) throw std::domain_error("atilde: index must be >= 1");
    for (const auto& [end, level] : *shared)
      if (jj <= end) return level;
    const auto& [end, level] = shared->back();
    return level * std::exp(-lp * static_cast<double>(jj - end));
  };
  return sp;
}

HumpResult gliding_hump_step(const BlockSubspaceSpec& spec, const Exponents& e,
                             double T, Index n, Index n_floor, double eps,
                             double delta_k, int first_generator, int* next_generator) {
  if (n < 0) throw std::domain_error("gliding_hump_step: n must be >= 0");
  if (!(eps > 0.0)) throw std::domain_error("gliding_hump_step: eps must be > 0");
  if (!(delta_k > 0.0)) throw std::domain_error("gliding_hump_step: delta_k must be > 0");
  if (!(T >= 1.0)) throw std::domain_error("gliding_hump_step: T must be >= 1");
  const Index lo_cut = std::max(2 * n + 1, std::max<Index>(n_floor, 1));

  Eigen::ArrayXd y;  // accumulated unnormalized sum, dense over 1..size
  int gi = first_generator, terms = 0;
  Index prev_cut = n;
  constexpr int kPickCap = 4000;

  while (true) {
    // next generator with a nonzero tail beyond prev_cut
    Eigen::ArrayXd tail;
    while (true) {
      if (gi > spec.max_index)
        throw construction_error("generator_exhausted",
                                 "gliding_hump_step: ran out of generators at index " +
                                     std::to_string(gi));
      Window g = spec.generator(gi++);
      if (g.empty() || g.last() <= prev_cut) continue;
      if (g.last() > kIndexCap)
        throw construction_error("index_cap",
                                 "gliding_hump_step: generator " + std::to_string(gi - 1) +
                                     " reaches index " + std::to_string(g.last()) +
                                     " beyond the cap " + std::to_string(kIndexCap) +
                                     "; reduce N or use planned inputs with a looser envelope");
      Eigen::ArrayXd t = Eigen::ArrayXd::Zero(g.last());
      t.segment(g.start - 1, g.values.size()) = g.values;
      if (prev_cut > 0) t.head(std::min(prev_cut, g.last())) = 0.0;
      if ((t != 0.0).any()) {
        tail = std::move(t);
        break;
      }
    }
    ++terms;
    double tn = quasi_norm_raw(tail, e);

    // inner cutoff: minimal index with the remaining tail below the stage target
    double target = tn * delta_k / std::pow(2.0 * T, terms);
    Index lo = prev_cut + 1, hi = tail.size();
    while (lo < hi) {
      Index mid = lo + (hi - lo) / 2;
      if (tail_norm(tail, mid, e) <= target) hi = mid; else lo = mid + 1;
    }
    prev_cut = lo;

    if (y.size() < tail.size()) {
      Index old = y.size();
      y.conservativeResize(tail.size());
      y.tail(tail.size() - old) = 0.0;
    }
    y.head(tail.size()) += tail / tn;

    double s = quasi_norm_raw(y, e);
    if (!(s > 0.0)) continue;
    if (y.abs().maxCoeff() / s > eps * (1.0 + 1e-13)) {
      if (terms >= kPickCap)
        throw construction_error("hump_stalled",
                                 "gliding_hump_step: entry bound unmet after " +
                                     std::to_string(terms) + " generators");
      continue;
    }

    // final cut: minimal m >= lo_cut with ||R_m u|| <= delta_k
    Index ylen = y.size();
    while (ylen > 0 && y[ylen - 1] == 0.0) --ylen;
    Index m_lo = lo_cut, m_hi = std::max(lo_cut, ylen);
    if (tail_norm(y, m_hi, e) > delta_k * s) {
      if (terms >= kPickCap)
        throw construction_error("hump_stalled", "gliding_hump_step: tail bound unmet");
      continue;  // should not happen: tail beyond ylen is zero
    }
    while (m_lo < m_hi) {
      Index mid = m_lo + (m_hi - m_lo) / 2;
      if (tail_norm(y, mid, e) <= delta_k * s) m_hi = mid; else m_lo = mid + 1;
    }
    const Index m = m_lo;

    Seq u(Eigen::ArrayXd(y / s));
    Seq v = project_head(u, m);
    Seq w = project_tail(u, m);
    double nv = quasi_norm(v, e);
    double nw = quasi_norm(w, e);
    bool ok = v.support_min() > n && nv <= 1.0 + 1e-12 &&
              nv >= 1.0 / T - delta_k - 1e-12 && nw <= delta_k * (1.0 + 1e-12);
    if (ok) {
      if (next_generator) *next_generator = gi;
      return {m, std::move(u), std::move(v), std::move(w), terms};
    }
    if (terms >= kPickCap)
      throw construction_error("hump_stalled", "gliding_hump_step: head/tail norms unmet");
  }
}

Index ConstructionState::n(int k) const {
  if (k < 0 || k > stage_count()) throw std::domain_error("ConstructionState::n: bad stage");
  return k == 0 ? 0 : stages[k - 1].n;
}

ConstructionState build_construction(const BlockSubspaceSpec& spec, const Exponents& e,
                                     int N, double delta, const AtildeSpec& atilde,
                                     int stage_cap) {
  if (!e.q_finite()) throw std::domain_error("build_construction: requires q < inf");
  if (N < 1 || N > stage_cap)
    throw construction_error("stage_cap", "build_construction: N out of 1.." +
                                              std::to_string(stage_cap));
  const double T = quasi_triangle_constant(e).value;
  if (!(delta > 0.0 && delta < 1.0 / T))
    throw construction_error("delta_range",
                             "build_construction: delta must lie in (0, 1/T), 1/T = " +
                                 std::to_string(1.0 / T));
  if (!(atilde.norm > 0.0 && atilde.norm <= 1.0))
    throw construction_error("atilde_norm", "build_construction: ||atilde|| must be in (0,1]");

  ConstructionState st;
  st.mode = ConstructionMode::full;
  st.p = e.p;
  st.q = e.q;
  st.T = T;
  st.delta = delta;
  st.atilde_norm = atilde.norm;
  st.atilde_desc = atilde.description;
  st.spec_desc = spec.description;

  int cursor = 1;
  for (int k = 1; k <= N; ++k) {
    double eps, delta_k = delta / std::pow(2.0 * T, k);
    Index n_prev = st.n(k - 1), n_floor;
    if (k == 1) {
      eps = 1.0;
      n_floor = 1;
    } else {
      const StageRecord& pr = st.stages[k - 2];
      eps = next_epsilon(pr.b, pr.c, st.a[pr.n - 1], pr.n, e);
      if (!(eps > 0.0))
        throw construction_error("eps_depleted",
                                 "build_construction: stage " + std::to_string(k) +
                                     " has no positive epsilon left (envelope exhausted)");
      n_floor = 2 * n_prev + 1;
    }

    HumpResult h = gliding_hump_step(spec, e, T, n_prev, n_floor, eps, delta_k, cursor, &cursor);
    if (h.m > kIndexCap)
      throw construction_error("index_cap",
                               "build_construction: stage " + std::to_string(k) + " needs index " +
                                   std::to_string(h.m) + " beyond the cap " +
                                   std::to_string(kIndexCap) +
                                   "; reduce N or use planned inputs with a looser envelope");

    StageRecord rec;
    rec.k = k;
    rec.n = h.m;
    rec.eps = eps;
    rec.c = c_value(k, h.m, e);
    rec.b = min_nonzero_abs(h.v.values());
    rec.u = Window::from_seq(h.u);
    rec.v = Window::from_seq(h.v);
    rec.w = Window::from_seq(h.w);

    // extend the weight sequence a over I_k = (n_{k-1}, n_k]
    double lambda = 1.0;
    if (k > 1) {
      double at_next = atilde.value(n_prev + 1);
      if (!(at_next > 0.0))
        throw construction_error("envelope_underflow",
                                 "build_construction: atilde vanished at " +
                                     std::to_string(n_prev + 1));
      lambda = std::min({st.a[n_prev - 1] / at_next, st.stages[k - 2].b / at_next, 1.0});
    }
    rec.lambda = lambda;
    st.a.conservativeResize(h.m);
    for (Index j = n_prev + 1; j <= h.m; ++j) st.a[j - 1] = lambda * atilde.value(j);

    st.stages.push_back(std::move(rec));
  }

  st.atilde.resize(st.n(N));
  for (Index j = 1; j <= st.n(N); ++j) st.atilde[j - 1] = atilde.value(j);

  auto checks = verify_construction(st);
  for (const CheckResult& c : checks)
    if (!c.ok)
      throw construction_error(c.condition,
                               "build_construction: condition '" + c.condition + "' failed at stage " +
                                   std::to_string(c.k) + " (lhs=" + std::to_string(c.lhs) +
                                   ", rhs=" + std::to_string(c.rhs) + ")");
  return st;
}

ConstructionState build_block_demo(const BlockSubspaceSpec& spec, const Exponents& e,
                                   int N, int stage_cap) {
  if (!e.q_finite()) throw std::domain_error("build_block_demo: requires q < inf");
  if (N < 1 || N > stage_cap)
    throw construction_error("stage_cap", "build_block_demo: N out of 1.." +
                                              std::to_string(stage_cap));
  ConstructionState st;
  st.mode = ConstructionMode::blocks;
  st.p = e.p;
  st.q = e.q;
  st.T = quasi_triangle_constant(e).value;
  st.delta = 0.0;
  st.spec_desc = spec.description;
  st.atilde_desc = "(none: relaxed block mode)";

  Index prev = 0;
  for (int k = 1; k <= N; ++k) {
    Window g = spec.generator(k);
    if (g.empty())
      throw construction_error("empty_generator", "build_block_demo: generator " +
                                                      std::to_string(k) + " is zero");
    if (g.start <= prev)
      throw construction_error("support_window",
                               "build_block_demo: generator " + std::to_string(k) +
                                   " starts at " + std::to_string(g.start) +
                                   " inside the previous block (end " + std::to_string(prev) + ")");
    if (g.last() > kIndexCap)
      throw construction_error("index_cap", "build_block_demo: stage " + std::to_string(k) +
                                                " exceeds index cap " + std::to_string(kIndexCap) +
                                                "; reduce N");
    double nrm = quasi_norm_raw(g.values, e);
    StageRecord rec;
    rec.k = k;
    rec.n = g.last();
    rec.u = Window{g.start, g.values / nrm};
    rec.v = rec.u;
    rec.w = Window{};
    rec.b = min_nonzero_abs(rec.u.values);
    rec.eps = 0.0;
    rec.c = 0.0;
    rec.lambda = 1.0;
    prev = rec.n;
    st.stages.push_back(std::move(rec));
  }
  return st;
}

PlannedInputs plan_construction_inputs(const Exponents& e, int N, double delta,
                                       double headroom) {
  if (!e.q_finite()) throw std::domain_error("plan_construction_inputs: requires q < inf");
  if (N < 1) throw std::domain_error("plan_construction_inputs: N must be >= 1");
  if (!(headroom > 1.0)) throw std::domain_error("plan_construction_inputs: headroom must be > 1");
  const double T = quasi_triangle_constant(e).value;
  if (!(delta > 0.0 && delta < 1.0 / T))
    throw construction_error("delta_range", "plan_construction_inputs: delta out of (0, 1/T)");

  const double s = e.q / e.p - 1.0;
  // minimal L with ||1_L||_{p,q} >= 1/eps, plus the exact norm at that L
  auto flat_search = [&](double eps) -> std::pair<Index, double> {
    const double need = std::pow(eps, -e.q);
    long double acc = 0.0L;
    Index L = 0;
    while (static_cast<double>(acc) < need) {
      ++L;
      if (L > kIndexCap)
        throw construction_error("index_cap",
                                 "plan_construction_inputs: block length exceeds index cap");
      acc += power_weight(L, s);
    }
    return {L, std::pow(static_cast<double>(acc), 1.0 / e.q)};
  };
  constexpr double kPlanMargin = 0.995;  // decouples planner/builder rounding

  std::vector<std::pair<Index, Index>> blocks;  // (start, len)
  std::vector<Index> bounds;
  std::vector<double> levels, heights;

  // stage 1: a two-entry block behind a one-entry gap
  {
    auto [L, nrm] = flat_search(1.0 / kPlanMargin);
    blocks.push_back({2, std::max<Index>(L, 2)});
    bounds.push_back(blocks[0].first + blocks[0].second - 1);
    heights.push_back(1.0 / quasi_norm_raw(Eigen::ArrayXd::Ones(blocks[0].second), e));
    (void)nrm;
    levels.push_back(std::min(1.0, heights[0]) * kPlanMargin / headroom);
  }

  for (int k = 1; k < N; ++k) {
    Index n_k = bounds[k - 1];
    double c_k = c_value(k, n_k, e);
    double eps = next_epsilon(heights[k - 1], c_k, levels[k - 1], n_k, e);
    if (!(eps > 0.0))
      throw construction_error("eps_depleted", "plan_construction_inputs: epsilon vanished");
    auto [L, nrm] = flat_search(eps * kPlanMargin);
    Index start = n_k + 1 + std::max<Index>(1, L / 8);
    start = std::max(start, 2 * n_k + 2 - L);  // enforce n_{k+1} > 2 n_k
    Index n_next = start + L - 1;
    if (n_next > kIndexCap)
      throw construction_error("index_cap",
                               "plan_construction_inputs: stage " + std::to_string(k + 1) +
                                   " needs index " + std::to_string(n_next) +
                                   " beyond the cap; reduce N or raise headroom");
    blocks.push_back({start, L});
    bounds.push_back(n_next);
    heights.push_back(1.0 / nrm);
    levels.push_back(std::min(levels[k - 1], heights[k] * kPlanMargin / headroom));
  }

  std::vector<std::pair<Index, double>> steps;
  for (int k = 0; k < N; ++k) steps.push_back({bounds[k], levels[k]});
  AtildeSpec atilde = AtildeSpec::staircase(e, steps);
  if (atilde.norm > 1.0)
    throw construction_error("atilde_norm",
                             "plan_construction_inputs: envelope norm " +
                                 std::to_string(atilde.norm) +
                                 " exceeds 1; raise headroom");

  std::vector<Seq> mat;
  for (auto [start, len] : blocks) mat.push_back(Seq::flat_block(start, len, 1.0));
  std::ostringstream oss;
  oss << "planned tiling blocks, N=" << N << ", headroom=" << headroom;
  PlannedInputs out{BlockSubspaceSpec::explicit_blocks(std::move(mat), oss.str()),
                    std::move(atilde), std::move(bounds)};
  return out;
}

namespace {

// vtilde_k over I_k: |v_k(j)| where v_k is supported, a(j) on the gaps
Eigen::ArrayXd vtilde(const ConstructionState& st, int k) {
  Index lo = st.n(k - 1) + 1, hi = st.n(k);
  Eigen::ArrayXd out(hi - lo + 1);
  const StageRecord& s = st.stages[k - 1];
  for (Index j = lo; j <= hi; ++j) {
    double x = std::abs(s.v.at(j));
    if (x == 0.0) x = st.a[j - 1];
    out[j - lo] = x;
  }
  return out;
}

}  // namespace

std::vector<CheckResult> verify_construction(const ConstructionState& st) {
  std::vector<CheckResult> out;
  auto add = [&](const char* cond, int k, bool ok, double lhs, double rhs) {
    out.push_back({cond, k, ok, lhs, rhs});
  };
  const Exponents e(st.p, st.q);
  const int N = st.stage_count();
  const bool full = st.mode == ConstructionMode::full;

  for (int k = 1; k <= N; ++k) {
    const StageRecord& s = st.stages[k - 1];
    const Index n_prev = st.n(k - 1);

    double nu = quasi_norm_raw(s.u.values, e);
    add("unit_norm", k, std::abs(nu - 1.0) <= 1e-12, std::abs(nu - 1.0), 1e-12);

    Index v_last = 0;
    for (Index i = s.v.values.size(); i >= 1; --i)
      if (s.v.values[i - 1] != 0.0) {
        v_last = s.v.start + i - 1;
        break;
      }
    add("support_window", k, s.u.start > n_prev && s.v.start > n_prev && v_last <= s.n,
        static_cast<double>(s.u.start), static_cast<double>(n_prev));

    if (!full) {
      add("index_increase", k, s.n > n_prev, static_cast<double>(n_prev),
          static_cast<double>(s.n));
      continue;
    }

    // u splits bitwise into v (head) and w (tail) at m = n_k
    bool split = true;
    Index span_lo = std::min({s.u.start, s.v.start, s.w.empty() ? s.u.start : s.w.start});
    Index span_hi = std::max({s.u.empty() ? Index(0) : s.u.last(),
                              s.v.empty() ? Index(0) : s.v.last(),
                              s.w.empty() ? Index(0) : s.w.last()});
    for (Index j = span_lo; j <= span_hi && split; ++j) {
      double expect = j <= s.n ? s.v.at(j) : s.w.at(j);
      double other = j <= s.n ? s.w.at(j) : s.v.at(j);
      if (s.u.at(j) != expect || other != 0.0) split = false;
    }
    add("head_tail_split", k, split, 0.0, 0.0);

    if (k >= 2) {
      const StageRecord& pr = st.stages[k - 2];
      add("index_growth", k, s.n > 2 * pr.n, static_cast<double>(s.n),
          static_cast<double>(2 * pr.n));
      double cap = std::min(std::min(pr.b, std::pow(pr.c, 1.0 / st.q)), st.a[pr.n - 1]);
      add("epsilon_cap", k, s.eps <= cap * (1.0 + 1e-12), s.eps, cap);
      double scaled = s.eps * power_weight(pr.n, 1.0 / st.p);
      add("epsilon_scale", k, scaled <= 1.0 + 1e-12, scaled, 1.0);
    }

    double maxv = s.v.empty() ? 0.0 : s.v.values.abs().maxCoeff();
    add("entry_bound", k, maxv <= s.eps * (1.0 + 1e-12), maxv, s.eps);

    double nv = quasi_norm_raw(s.v.values, e);
    add("head_mass_low", k, nv >= 1.0 / st.T - st.delta - 1e-12, nv, 1.0 / st.T - st.delta);
    add("head_mass_high", k, nv <= 1.0 + 1e-12, nv, 1.0);

    double nw = s.w.empty() ? 0.0 : quasi_norm_raw(s.w.values, e);
    double wcap = st.delta / std::pow(2.0 * st.T, k);
    add("tail_decay", k, nw <= wcap * (1.0 + 1e-12), nw, wcap);

    double cexp = c_value(k, s.n, e);
    add("c_value", k, std::abs(s.c - cexp) <= 1e-12 * cexp, s.c, cexp);
    double bexp = min_nonzero_abs(s.v.values);
    add("b_value", k, s.b == bexp, s.b, bexp);
    add("lambda_cap", k, s.lambda <= 1.0 + 1e-12, s.lambda, 1.0);
  }

  if (!full) return out;

  const Index n_N = st.n(N);
  bool sized = st.a.size() == n_N && st.atilde.size() == n_N;
  add("weight_sized", 0, sized, static_cast<double>(st.a.size()), static_cast<double>(n_N));
  if (!sized) return out;

  bool envelope = true, monotone = true;
  double env_l = 0, env_r = 0;
  for (Index j = 1; j <= n_N; ++j) {
    if (st.a[j - 1] > st.atilde[j - 1] * (1.0 + 1e-12)) {
      envelope = false;
      env_l = st.a[j - 1];
      env_r = st.atilde[j - 1];
      break;
    }
    if (j > 1 && st.a[j - 1] > st.a[j - 2] * (1.0 + 1e-12)) monotone = false;
    if (st.a[j - 1] < 0.0) monotone = false;
  }
  add("envelope_bound", 0, envelope, env_l, env_r);
  add("a_monotone", 0, monotone, 0.0, 0.0);

  // the recursion only consumes a(n_k) for k < N; those must stay positive
  bool apos = true;
  for (int k = 1; k < N; ++k)
    if (!(st.a[st.n(k) - 1] > 0.0)) apos = false;
  add("a_positive_at_cuts", 0, apos, 0.0, 0.0);

  for (int k = 1; k < N; ++k)
    add("boundary_drop", k, st.a[st.n(k)] <= st.stages[k - 1].b * (1.0 + 1e-12),
        st.a[st.n(k)], st.stages[k - 1].b);

  // weighted monotone chain across consecutive intervals
  std::vector<Eigen::ArrayXd> vt;
  vt.reserve(N);
  for (int k = 1; k <= N; ++k) vt.push_back(vtilde(st, k));
  for (int k = 1; k < N; ++k) {
    double lhs = std::pow(static_cast<double>(k), -1.0 / st.q) * vt[k - 1].minCoeff();
    double rhs = std::pow(static_cast<double>(k + 1), -1.0 / st.q) * vt[k].maxCoeff();
    add("chain_monotone", k, lhs >= rhs - 1e-12 * std::max(1.0, std::abs(rhs)), lhs, rhs);
  }

  // global rearrangement equals blockwise rearrangement, entrywise
  {
    std::vector<double> lhs;
    lhs.reserve(n_N);
    std::vector<double> rhs;
    rhs.reserve(n_N);
    for (int k = 1; k <= N; ++k) {
      double wgt = std::pow(static_cast<double>(k), -1.0 / st.q);
      Eigen::ArrayXd seg = wgt * vt[k - 1];
      std::vector<double> sorted(seg.data(), seg.data() + seg.size());
      std::sort(sorted.begin(), sorted.end(), std::greater<double>());
      rhs.insert(rhs.end(), sorted.begin(), sorted.end());
      lhs.insert(lhs.end(), seg.data(), seg.data() + seg.size());
    }
    std::sort(lhs.begin(), lhs.end(), std::greater<double>());
    Index mismatch = 0;
    double worst = 0.0;
    for (size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] != rhs[i]) {
        ++mismatch;
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
      }
    add("rearrangement_identity", 0, mismatch == 0, static_cast<double>(mismatch), worst);
  }

  return out;
}

bool all_ok(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (!c.ok) return false;
  return true;
}

GrowthCurve growth_curve(const ConstructionState& st, double r,
                         const std::vector<int>& counts, int fit_min) {
  Exponents pq(st.p, st.q);
  if (!pq.q_finite()) throw std::domain_error("growth_curve: requires q < inf");
  Exponents pr(st.p, r);
  if (counts.empty()) throw std::domain_error("growth_curve: no row counts");
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 1 || counts[i] > st.stage_count())
      throw std::domain_error("growth_curve: count out of range");
    if (i > 0 && counts[i] <= counts[i - 1])
      throw std::domain_error("growth_curve: counts must be strictly increasing");
  }

  Index zlen = 0;
  for (int k = 0; k < counts.back(); ++k)
    zlen = std::max(zlen, st.stages[k].u.empty() ? Index(0) : st.stages[k].u.last());
  Eigen::ArrayXd z = Eigen::ArrayXd::Zero(zlen);

  GrowthCurve curve;
  curve.r = r;
  int cursor = 0;
  Index used = 0;
  for (int target : counts) {
    while (cursor < target) {
      const Window& u = st.stages[cursor].u;
      double wgt = std::pow(static_cast<double>(cursor + 1), -1.0 / st.q);
      if (!u.empty()) {
        z.segment(u.start - 1, u.values.size()) += wgt * u.values;
        used = std::max(used, u.last());
      }
      ++cursor;
    }
    curve.rows.push_back({target, quasi_norm_raw(z.head(used), pq),
                          quasi_norm_raw(z.head(used), pr)});
  }

  // least squares of norm_pq^q on ln N over the fit window
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const GrowthRow& row : curve.rows) {
    if (row.count < fit_min) continue;
    double x = std::log(static_cast<double>(row.count));
    double y = std::pow(row.norm_pq, st.q);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2) {
    double det = m * sxx - sx * sx;
    double slope = (m * sxy - sx * sy) / det;
    double inter = (sy * sxx - sx * sxy) / det;
    double ss_res = 0, ss_tot = 0, mean = sy / m;
    for (const GrowthRow& row : curve.rows) {
      if (row.count < fit_min) continue;
      double x = std::log(static_cast<double>(row.count));
      double y = std::pow(row.norm_pq, st.q);
      ss_res += (y - slope * x - inter) * (y - slope * x - inter);
      ss_tot += (y - mean) * (y - mean);
    }
    curve.fit = {slope, -inter, ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot, m};
  }
  return curve;
}

namespace {

using nlohmann::json;

json runs_of(const Eigen::ArrayXd& v) {
  json runs = json::array();
  Index i = 0;
  while (i < v.size()) {
    Index j = i;
    while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;
    runs.push_back(json::array({j - i + 1, v[i]}));
    i = j + 1;
  }
  return runs;
}

Eigen::ArrayXd runs_to_array(const json& runs) {
  Index total = 0;
  for (const auto& r : runs) total += r.at(0).get<Index>();
  Eigen::ArrayXd v(total);
  Index at = 0;
  for (const auto& r : runs) {
    Index len = r.at(0).get<Index>();
    double val = r.at(1).get<double>();
    v.segment(at, len) = val;
    at += len;
  }
  return v;
}

json window_to_json(const Window& w) {
  return {{"start", w.start}, {"runs", runs_of(w.values)}};
}

Window window_from_json(const json& j) {
  Window w;
  w.start = j.at("start").get<Index>();
  w.values = runs_to_array(j.at("runs"));
  return w;
}

}  // namespace

std::string to_json(const ConstructionState& st) {
  json j;
  j["format"] = "lorentz-construction/1";
  j["mode"] = st.mode == ConstructionMode::full ? "full" : "blocks";
  j["p"] = st.p;
  j["q"] = st.q;
  j["T"] = st.T;
  j["delta"] = st.delta;
  j["spec_desc"] = st.spec_desc;
  j["atilde_desc"] = st.atilde_desc;
  if (st.mode == ConstructionMode::full) {
    j["atilde_norm"] = st.atilde_norm;
    j["a_runs"] = runs_of(st.a);
    j["atilde_runs"] = runs_of(st.atilde);
  }
  json stages = json::array();
  for (const StageRecord& s : st.stages) {
    json e = {{"k", s.k}, {"n", s.n}, {"u", window_to_json(s.u)}};
    if (st.mode == ConstructionMode::full) {
      e["eps"] = s.eps;
      e["c"] = s.c;
      e["b"] = s.b;
      e["lambda"] = s.lambda;
      e["v"] = window_to_json(s.v);
      e["w"] = window_to_json(s.w);
    }
    stages.push_back(std::move(e));
  }
  j["stages"] = std::move(stages);
  return j.dump();
}

ConstructionState state_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format").get<std::string>() != "lorentz-construction/1")
    throw std::invalid_argument("state_from_json: unknown format tag");
  ConstructionState st;
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "full")
    st.mode = ConstructionMode::full;
  else if (mode == "blocks")
    st.mode = ConstructionMode::blocks;
  else
    throw std::invalid_argument("state_from_json: bad mode");
  st.p = j.at("p").get<double>();
  st.q = j.at("q").get<double>();
  st.T = j.at("T").get<double>();
  st.delta = j.at("delta").get<double>();
  st.spec_desc = j.value("spec_desc", "");
  st.atilde_desc = j.value("atilde_desc", "");
  if (st.mode == ConstructionMode::full) {
    st.atilde_norm = j.at("atilde_norm").get<double>();
    st.a = runs_to_array(j.at("a_runs"));
    st.atilde = runs_to_array(j.at("atilde_runs"));
  }
  for (const auto& e : j.at("stages")) {
    StageRecord s;
    s.k = e.at("k").get<int>();
    s.n = e.at("n").get<Index>();
    s.u = window_from_json(e.at("u"));
    if (st.mode == ConstructionMode::full) {
      s.eps = e.at("eps").get<double>();
      s.c = e.at("c").get<double>();
      s.b = e.at("b").get<double>();
      s.lambda = e.at("lambda").get<double>();
      s.v = window_from_json(e.at("v"));
      s.w = window_from_json(e.at("w"));
    } else {
      s.v = s.u;
      s.b = min_nonzero_abs(s.u.values);
      s.lambda = 1.0;
    }
    st.stages.push_back(std::move(s));
  }
  return st;
}

}  // namespace lorentz

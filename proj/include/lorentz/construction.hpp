#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lorentz/exponents.hpp"
#include "lorentz/norms.hpp"
#include "lorentz/seq.hpp"

namespace lorentz {

// Raised when an inductive-construction condition cannot be met or fails
// verification; `condition` names the violated bound.
struct construction_error : std::runtime_error {
  std::string condition;
  construction_error(std::string cond, const std::string& msg)
      : std::runtime_error(msg), condition(std::move(cond)) {}
};

// Hard cap on sequence indices touched by a construction run.
inline constexpr Index kIndexCap = 10'000'000;
// Default cap on the number of stages.
inline constexpr int kStageCap = 1 << 14;

// Sequence window: entries of a sequence on {start .. start+values.size()-1},
// zero elsewhere.  Keeps stage payloads linear in total support.
struct Window {
  Index start = 1;
  Eigen::ArrayXd values;

  static Window from_seq(const Seq& s);
  Seq to_seq() const;
  double at(Index j) const;           // logical 1-indexed entry
  Index last() const { return start + values.size() - 1; }
  bool empty() const { return values.size() == 0; }
};

// Countable family of generators spanning the ambient block subspace.
// Generators are produced as windows so far-offset blocks stay cheap.
struct BlockSubspaceSpec {
  std::function<Window(int)> generator;  // k = 1, 2, ...
  std::string description;
  int max_index = 200000;

  // g_k = 1 on {2^k .. 2^{k+1}-1}: exactly disjoint, tiling {2..}
  static BlockSubspaceSpec dyadic_blocks();
  // g_k(j) = ratio^(j - o_k) for j >= o_k = (k-1) stride + 1: overlapping tails
  static BlockSubspaceSpec geometric_tails(double ratio = 0.5, Index stride = 4);
  static BlockSubspaceSpec explicit_blocks(std::vector<Seq> blocks, std::string desc);
  // Demo schedule: one block {1..first_len}, then consecutive slices of width
  // ceil((rho-1) * current end).  Tiles {1..} with slowly geometric widths.
  static BlockSubspaceSpec demo_blocks(Index first_len = 65536, double rho = 1.00114,
                                       int count = kStageCap);
};

// Fixed positive nonincreasing envelope with ||atilde||_{p,q} <= 1.
struct AtildeSpec {
  std::function<double(Index)> value;  // j >= 1
  double norm;
  std::string description;

  // zeta * 2^{-j/p} with zeta chosen so the norm equals target (default 1/2)
  static AtildeSpec geometric(const Exponents& e, double target_norm = 0.5);
  // piecewise constant: level steps[i].second on (steps[i-1].first, steps[i].first],
  // continued geometrically (ratio 2^{-1/p}) beyond the last step index.
  // Levels must be positive nonincreasing.
  static AtildeSpec staircase(const Exponents& e,
                              std::vector<std::pair<Index, double>> steps);
};

struct HumpResult {
  Index m;
  Seq u, v, w;
  int terms;            // generators consumed
};

// One gliding-hump step: from the tails beyond n of the next generators,
// builds a unit vector u = (u_1 + ... + u_t)/s and a cut m with
//   m >= max(2n+1, n_floor),  supp(P_m u) in (n, m],  |P_m u(j)| <= eps,
//   1/T - delta_k <= ||P_m u||_{p,q} <= 1,  ||R_m u||_{p,q} <= delta_k,
// where m is minimal with the tail bound among indices >= max(2n+1, n_floor).
// Exactly-disjoint specs finish with a single generator and w = 0.
HumpResult gliding_hump_step(const BlockSubspaceSpec& spec, const Exponents& e,
                             double T, Index n, Index n_floor, double eps,
                             double delta_k, int first_generator = 1,
                             int* next_generator = nullptr);

struct StageRecord {
  int k = 0;
  Index n = 0;          // n_k: right endpoint of I_k = (n_{k-1}, n_k]
  double eps = 0;       // eps_k
  double c = 0;         // c_k = 1/(k n_k max_{j<=n_k} j^{q/p-1})
  double b = 0;         // min nonzero |v_k|
  double lambda = 1;    // scaling of atilde on I_k (1 for k = 1)
  Window u, v, w;
};

enum class ConstructionMode { full, blocks };

struct ConstructionState {
  ConstructionMode mode = ConstructionMode::full;
  double p = 2, q = 1;
  double T = 0;          // analytic quasi-triangle constant for (p,q)
  double delta = 0;
  std::vector<StageRecord> stages;
  Eigen::ArrayXd a;        // a(1..n_N)      (full mode)
  Eigen::ArrayXd atilde;   // atilde(1..n_N) (full mode)
  double atilde_norm = 0;
  std::string atilde_desc, spec_desc;

  Index n(int k) const;    // n_k with n(0) = 0
  int stage_count() const { return static_cast<int>(stages.size()); }
};

// Inductive construction with the full condition set; verifies every stage
// and the final state, throwing construction_error on the first violation.
ConstructionState build_construction(const BlockSubspaceSpec& spec, const Exponents& e,
                                     int N, double delta, const AtildeSpec& atilde,
                                     int stage_cap = kStageCap);

// Relaxed demo mode: u_k = g_k/||g_k|| over disjoint consecutive generators,
// no eps/envelope chain.  Supports thousands of stages under the index cap.
ConstructionState build_block_demo(const BlockSubspaceSpec& spec, const Exponents& e,
                                   int N, int stage_cap = kStageCap);

struct PlannedInputs {
  BlockSubspaceSpec spec;
  AtildeSpec atilde;
  std::vector<Index> boundaries;  // planned n_k
};

// Forward-recurrence co-design of tiling blocks (with a small head gap per
// stage) and a staircase envelope whose levels sit at h_k/headroom, such that
// the full condition set is satisfiable for N stages under the index cap.
// The envelope is fixed before build_construction runs against it.
PlannedInputs plan_construction_inputs(const Exponents& e, int N, double delta,
                                       double headroom = 6.0);

struct CheckResult {
  std::string condition;
  int k;             // stage, 0 for global conditions
  bool ok;
  double lhs, rhs;   // the compared quantities (lhs <= rhs expected)
};

// Re-verifies every recorded condition on a state (also usable after JSON
// round-trips).  Full mode checks: unit_norm, support_window, head_tail_split,
// index_growth, epsilon_cap, epsilon_scale, entry_bound, head_mass_low,
// head_mass_high, tail_decay, c_value, b_value, lambda_cap, weight_sized,
// envelope_bound, a_monotone, a_positive_at_cuts, boundary_drop,
// chain_monotone, rearrangement_identity.  Blocks mode checks the applicable
// subset (unit_norm, support_window, index_increase).
std::vector<CheckResult> verify_construction(const ConstructionState& st);
bool all_ok(const std::vector<CheckResult>& checks);

struct GrowthRow {
  int count;          // number of stages summed
  double norm_pq;     // ||z_N||_{p,q}
  double norm_pr;     // ||z_N||_{p,r}
};
struct GrowthFit {
  double a = 0, b = 0, r2 = 0;  // norm_pq^q ~ a ln N - b over the fit window
  int points = 0;
};
struct GrowthCurve {
  double r;
  std::vector<GrowthRow> rows;
  GrowthFit fit;
};

// Partial sums z_N = sum_{k<=N} k^{-1/q} u_k evaluated at the requested stage
// counts (ascending).  Fit window: rows with count >= fit_min.
GrowthCurve growth_curve(const ConstructionState& st, double r,
                         const std::vector<int>& counts, int fit_min = 1);

std::string to_json(const ConstructionState& st);
ConstructionState state_from_json(const std::string& text);

}  // namespace lorentz

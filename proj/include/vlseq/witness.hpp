#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "vlseq/embedding.hpp"
#include "vlseq/error.hpp"
#include "vlseq/exponents.hpp"
#include "vlseq/norms.hpp"
#include "vlseq/sequence.hpp"

namespace vlseq {

/// One block N_k = {first, ..., first + length - 1} of a witness.
struct BlockSpec {
  double first = 0.0;
  double length = 0.0;
  double target = 0.0;     // upper limit for c_k
  double c = 0.0;          // 0 < c <= target
  double block_sum = 0.0;  // sum_{n in N_k} c^{r_n}, ~1
  int group = 1;
};

struct WitnessPlan {
  double K = 0.0;
  double alpha = 0.0;  // 2^{1/p_-}
  std::vector<BlockSpec> blocks;
  double extent = 0.0;  // last index carrying a nonzero entry
};

struct WitnessOptions {
  double block_tol = 1e-10;
  double max_block_length = 1e7;  // indices walked one at a time per block
  Index cap = default_enumeration_cap;
};

struct Witness {
  RunSequence sequence;
  WitnessPlan plan;
};

namespace detail {

// Lays out consecutive blocks on U = {p_n < q_n < inf}. Where both exponent
// sequences are constant the rest of a block becomes a single run.
class BlockBuilder {
 public:
  BlockBuilder(const ExponentSequence& p, const ExponentSequence& q, const WitnessOptions& opt)
      : p_(p), q_(q), opt_(opt), usable_(difference_set(p, q, Comparison::less, opt.cap).intersect(finite_indices(q))) {
    const auto e = exists_c(p, q, usable_, opt.cap);
    require(e.answer == ExistsC::Answer::no,
            std::string("block witness needs sum c^{r_n} = inf for every c on {p_n < q_n < inf}; criterion says ") +
                to_string(e.answer));
    const auto pa = analyze_pair(p, q, opt.cap);
    horizon_ = std::max<Index>({pa.horizon, p.prefix_length(), q.prefix_length()});
    constant_region_ = p.constant_tail() && q.constant_tail();
    if (constant_region_) {
      const Exponent pt = p(horizon_ + 1), qt = q(horizon_ + 1);
      r_tail_ = gap_reciprocal(pt, qt).value();
      p_tail_ = pt.value();
    }
  }

  BlockSpec build(double target, double amplitude, RunSequence& out) {
    BlockSpec spec;
    spec.target = target;
    spec.first = cursor_;

    std::vector<std::pair<Index, double>> explicit_terms;  // (n, r_n)
    double sum = 0.0;
    double walked = 0.0;
    while (sum < 1.0 && (!constant_region_ || cursor_ <= static_cast<double>(horizon_))) {
      if (++walked > opt_.max_block_length)
        throw NumericalFailure("witness block exceeds max block length " + std::to_string(opt_.max_block_length));
      const auto n = static_cast<Index>(cursor_);
      cursor_ += 1.0;
      if (!usable_.contains(n)) continue;
      const Exponent r = gap_reciprocal(p_(n), q_(n));
      if (r.is_infinite()) continue;
      explicit_terms.emplace_back(n, r.value());
      sum += std::pow(target, r.value());
    }

    double run_length = 0.0;
    if (sum < 1.0) run_length = std::max(1.0, std::ceil((1.0 - sum) / std::pow(target, r_tail_)));

    auto block_sum = [&](double c) {
      double s = run_length > 0.0 ? run_length * std::pow(c, r_tail_) : 0.0;
      for (const auto& [n, r] : explicit_terms) s += std::pow(c, r);
      return s;
    };

    double c = target;
    if (explicit_terms.empty()) {
      c = std::min(target, std::pow(run_length, -1.0 / r_tail_));
    } else if (std::abs(block_sum(target) - 1.0) > opt_.block_tol) {
      double lo = 0.0, hi = target;
      for (int it = 0; it < 400; ++it) {
        c = 0.5 * (lo + hi);
        const double s = block_sum(c);
        if (std::abs(s - 1.0) <= opt_.block_tol * 0.5) break;
        (s > 1.0 ? hi : lo) = c;
      }
    }
    spec.c = c;
    spec.block_sum = block_sum(c);

    for (const auto& [n, r] : explicit_terms)
      out.append({static_cast<double>(n), 1.0, amplitude * std::pow(c, r / p_(n).value())});
    if (run_length > 0.0) {
      out.append({cursor_, run_length, amplitude * std::pow(c, r_tail_ / p_tail_)});
      cursor_ += run_length;
    }
    spec.length = cursor_ - spec.first;
    return spec;
  }

  double extent() const { return cursor_ - 1.0; }

 private:
  const ExponentSequence& p_;
  const ExponentSequence& q_;
  WitnessOptions opt_;
  IndexSet usable_;
  Index horizon_ = 0;
  bool constant_region_ = false;
  double r_tail_ = 1.0;
  double p_tail_ = 1.0;
  double cursor_ = 1.0;
};

}  // namespace detail

/// a in l_q with sum a_n^{q_n} <= 1 whose p-modular at scale 1/K is unbounded:
/// block k carries (a_n/K)^{p_n} = c_k^{r_n} with sum over the block equal to 1
/// and c_k <= 1/(alpha^k K).
inline Witness construct_block_witness(const ExponentSequence& p, const ExponentSequence& q, double K, int num_blocks,
                                       const WitnessOptions& opt = {}) {
  detail::require(K > 1.0, "witness scale K must exceed 1");
  detail::require(num_blocks >= 1, "need at least one block");
  detail::BlockBuilder builder(p, q, opt);
  Witness w;
  w.plan.K = K;
  w.plan.alpha = std::pow(2.0, p.inf().reciprocal());
  double damping = 1.0;
  for (int k = 1; k <= num_blocks; ++k) {
    damping *= w.plan.alpha;
    auto spec = builder.build(1.0 / (damping * K), K, w.sequence);
    w.plan.blocks.push_back(spec);
  }
  w.plan.extent = builder.extent();
  return w;
}

/// a = epsilon * b with b the block witness at scale K / epsilon, so that
/// sum (a_n/epsilon)^{q_n} <= 1 while sum (a_n/K)^{p_n} is unbounded.
inline Witness construct_scaled_witness(const ExponentSequence& p, const ExponentSequence& q, double epsilon, double K,
                                        int num_blocks, const WitnessOptions& opt = {}) {
  detail::require(epsilon > 0.0 && epsilon <= 1.0, "epsilon must lie in (0, 1]");
  detail::require(K > 1.0, "witness scale K must exceed 1");
  auto w = construct_block_witness(p, q, K / epsilon, num_blocks, opt);
  w.sequence = w.sequence.scaled(epsilon);
  return w;
}

/// One sequence refuting every scale K <= num_groups at once. Blocks are dealt
/// round-robin to groups; group k is the block witness at scale k alpha^k
/// scaled by alpha^{-k}, so its q-modular is at most 2^{-k}.
inline Witness construct_universal_witness(const ExponentSequence& p, const ExponentSequence& q, int num_groups,
                                           int blocks_per_group, const WitnessOptions& opt = {}) {
  detail::require(num_groups >= 1 && blocks_per_group >= 1, "need at least one group and one block per group");
  detail::BlockBuilder builder(p, q, opt);
  Witness w;
  w.plan.alpha = std::pow(2.0, p.inf().reciprocal());
  w.plan.K = static_cast<double>(num_groups);
  const double alpha = w.plan.alpha;
  for (int b = 0; b < num_groups * blocks_per_group; ++b) {
    const int k = b % num_groups + 1;
    const int j = b / num_groups + 1;
    const double target = 1.0 / (std::pow(alpha, j) * k * std::pow(alpha, k));
    auto spec = builder.build(target, static_cast<double>(k), w.sequence);
    spec.group = k;
    w.plan.blocks.push_back(spec);
  }
  w.plan.extent = builder.extent();
  return w;
}

/// All-ones sequence of length D: in l_inf but outside l_p whenever
/// sum c^{p_n} diverges for all c.
inline FiniteSequence linfty_witness(std::size_t D) {
  detail::require(D >= 1, "need D >= 1");
  return FiniteSequence(std::vector<double>(D, 1.0));
}

struct WitnessReport {
  double q_modular = 0.0;
  double scaled_p_modular = 0.0;  // sum (a_n / K)^{p_n}
  bool passes = false;
};

inline WitnessReport verify_witness(const RunSequence& a, const ExponentSequence& p, const ExponentSequence& q,
                                    double K, double threshold, double tol = 1e-6) {
  detail::require(K > 0.0, "K must be positive");
  WitnessReport r;
  r.q_modular = modular(a, q);
  r.scaled_p_modular = modular(a, p, K);
  r.passes = r.q_modular <= 1.0 + tol && r.scaled_p_modular >= threshold;
  return r;
}

inline WitnessReport verify_witness(const FiniteSequence& a, const ExponentSequence& p, const ExponentSequence& q,
                                    double K, double threshold, double tol = 1e-6) {
  return verify_witness(RunSequence::from_dense(a), p, q, K, threshold, tol);
}

/// Cumulative sum (a_n/K)^{p_n} after each block, for the linear-growth check.
inline std::vector<double> cumulative_scaled_mass(const Witness& w, const ExponentSequence& p, double K) {
  std::vector<double> out;
  out.reserve(w.plan.blocks.size());
  double total = 0.0;
  std::size_t run = 0;
  const auto& runs = w.sequence.runs();
  for (const auto& block : w.plan.blocks) {
    RunSequence part;
    const double end = block.first + block.length;
    while (run < runs.size() && runs[run].first < end) part.append(runs[run++]);
    total += modular(part, p, K);
    out.push_back(total);
  }
  return out;
}

}  // namespace vlseq

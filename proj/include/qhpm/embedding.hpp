#ifndef QHPM_EMBEDDING_HPP_
#define QHPM_EMBEDDING_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qhpm/error.hpp"
#include "qhpm/homotopy.hpp"
#include "qhpm/linalg.hpp"
#include "qhpm/quadratic_system.hpp"

namespace qhpm {

/// Largest N we will lay out; sparse storage indices are 32-bit.
inline constexpr std::int64_t kMaxEmbeddingDimension = std::numeric_limits<int>::max();

/*
 * One block of y.
 *
 * Level 0 is the single block y_0 = nu_0 + ... + nu_c (empty tuple).
 * At level i >= 1, slot 0 is the split group for y_{i,0}: split_r = r holds
 * F0^{(x)r} (x) nu_0^{(x)(i+1-r)} and the tuple is all zeros. Slots >= 1 hold
 * nu_{a_0} (x) ... (x) nu_{a_i} for a nonzero tuple a with sum(a) <= c - i.
 */
struct TermIndex {
  int level = 0;
  std::int64_t slot = 0;
  std::vector<int> tuple;
  std::optional<int> split_r;

  bool operator==(const TermIndex&) const = default;

  bool is_split() const { return split_r.has_value(); }
};

inline TermIndex solution_term() { return TermIndex{}; }

inline TermIndex split_term(int level, int r) {
  return TermIndex{level, 0, std::vector<int>(level + 1, 0), r};
}

class EmbeddingLayout {
 public:
  int order_c = 0;
  Eigen::Index n = 0;
  std::vector<TermIndex> terms;
  std::vector<Eigen::Index> offsets;
  std::vector<Eigen::Index> block_dims;
  Eigen::Index total_dim_n = 0;
  std::vector<std::uint64_t> beta_counts;

  std::size_t size() const { return terms.size(); }

  std::optional<std::size_t> find(const TermIndex& term) const {
    const auto it = by_key_.find(key(term));
    if (it == by_key_.end() || terms[it->second] != term) return std::nullopt;
    return it->second;
  }

  /// Position of the level-`level` block whose nu-index tuple is `tuple`;
  /// the all-zero tuple resolves to the split-0 block nu_0^{(x)(level+1)}.
  std::optional<std::size_t> find_tuple(int level, const std::vector<int>& tuple) const {
    if (level < 1 || level > order_c) return std::nullopt;
    const auto& index = by_tuple_[level];
    const auto it = index.find(tuple);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void append(TermIndex term, Eigen::Index dim) {
    const std::size_t pos = terms.size();
    offsets.push_back(total_dim_n);
    block_dims.push_back(dim);
    total_dim_n += dim;
    by_key_[key(term)] = pos;
    if (term.level >= 1 && (!term.split_r || *term.split_r == 0)) {
      if (by_tuple_.size() <= static_cast<std::size_t>(term.level)) by_tuple_.resize(term.level + 1);
      by_tuple_[term.level][term.tuple] = pos;
    }
    terms.push_back(std::move(term));
  }

 private:
  using Key = std::tuple<int, std::int64_t, int>;
  static Key key(const TermIndex& t) { return {t.level, t.slot, t.split_r.value_or(-1)}; }

  std::map<Key, std::size_t> by_key_;
  std::vector<std::map<std::vector<int>, std::size_t>> by_tuple_;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(ErrorKind::dimension_overflow, "embedding dimension overflows 64 bits");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw Error(ErrorKind::dimension_overflow, "embedding dimension overflows 64 bits");
  return out;
}

// Pascal row c+1, exact in 64 bits for c <= 64.
inline std::vector<std::uint64_t> binomial_row(int m) {
  std::vector<std::uint64_t> row{1};
  for (int r = 1; r <= m; ++r) {
    std::vector<std::uint64_t> next(r + 1, 1);
    for (int k = 1; k < r; ++k) next[k] = checked_add(row[k - 1], row[k]);
    row = std::move(next);
  }
  return row;
}

// Tuples of the given length with entries >= 0 summing to `total`, lexicographic.
inline void tuples_with_sum(int length, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == length - 1) {
    prefix.push_back(total);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    prefix.push_back(v);
    tuples_with_sum(length, total - v, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// Total dimension sum_i n^{i+1} (beta_i + i), overflow-checked.
inline std::uint64_t embedding_dimension(std::uint64_t n, int c) {
  const std::vector<std::uint64_t> binom = detail::binomial_row(c + 1);
  std::uint64_t total = 0;
  std::uint64_t power = 1;
  for (int i = 0; i <= c; ++i) {
    power = detail::checked_mul(power, n);
    const std::uint64_t beta = i == 0 ? 1 : binom[i + 1];
    total = detail::checked_add(total, detail::checked_mul(power, detail::checked_add(beta, i)));
  }
  return total;
}

inline EmbeddingLayout enumerate_layout(Eigen::Index n, int c) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "n must be positive");
  if (c < kMinOrder || c > kMaxOrder) throw Error(ErrorKind::invalid_argument, "order c must lie in [1, 64]");
  const std::uint64_t total = embedding_dimension(static_cast<std::uint64_t>(n), c);
  if (total > static_cast<std::uint64_t>(kMaxEmbeddingDimension))
    throw Error(ErrorKind::dimension_overflow,
                "N = " + std::to_string(total) + " exceeds " + std::to_string(kMaxEmbeddingDimension));

  EmbeddingLayout layout;
  layout.order_c = c;
  layout.n = n;
  layout.beta_counts.assign(c + 1, 0);
  layout.append(solution_term(), n);
  layout.beta_counts[0] = 1;

  Eigen::Index block = n;
  for (int level = 1; level <= c; ++level) {
    block *= n;
    for (int r = 0; r <= level; ++r) layout.append(split_term(level, r), block);
    std::int64_t slot = 1;
    for (int sum = 1; sum <= c - level; ++sum) {
      std::vector<std::vector<int>> tuples;
      std::vector<int> prefix;
      detail::tuples_with_sum(level + 1, sum, prefix, tuples);
      for (auto& tuple : tuples) layout.append(TermIndex{level, slot++, std::move(tuple), std::nullopt}, block);
    }
    layout.beta_counts[level] = static_cast<std::uint64_t>(slot);
  }
  return layout;
}

/// The assembled linear system A y = b together with its layout.
struct EmbeddedSystem {
  SparseMatrix matrix_a;
  Vector vector_b;
  EmbeddingLayout layout;
  Eigen::Index sparsity_s_a = 0;
};

namespace detail {

inline Eigen::Index int_pow(Eigen::Index base, int exp) {
  Eigen::Index out = 1;
  for (int k = 0; k < exp; ++k) out *= base;
  return out;
}

// I_left (x) m (x) I_right placed with its top-left corner at (row0, col0).
inline void emit_kron(const SparseMatrix& m, Eigen::Index left, Eigen::Index right, Eigen::Index row0,
                      Eigen::Index col0, std::vector<Triplet>& out) {
  for (Eigen::Index k = 0; k < m.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
      for (Eigen::Index a = 0; a < left; ++a) {
        const Eigen::Index row_base = row0 + (a * m.rows() + it.row()) * right;
        const Eigen::Index col_base = col0 + (a * m.cols() + it.col()) * right;
        for (Eigen::Index b = 0; b < right; ++b) out.emplace_back(row_base + b, col_base + b, it.value());
      }
    }
  }
}

inline void emit_identity(Eigen::Index dim, Eigen::Index row0, Eigen::Index col0, std::vector<Triplet>& out) {
  for (Eigen::Index k = 0; k < dim; ++k) out.emplace_back(row0 + k, col0 + k, 1.0);
}

inline Vector kron_power(const Vector& v, int count) {
  Vector out = Vector::Ones(1);
  for (int k = 0; k < count; ++k) out = kron(out, v);
  return out;
}

}  // namespace detail

/*
 * Row blocks, all with positive coefficients on the left:
 *   y_0 row:     F1 y_0 + sum over level-1 tuples (a0,a1) of F2 y_{1,(a0,a1)} = -F0
 *   split row r: B_{i,r} y_{i,0,r} + y_{i,0,r+1} = 0 (r < i),
 *                B_{i,i} y_{i,0,i} = -F0^{(x)(i+1)}
 *   tuple row:   (I^k (x) F1 (x) I^{i-k}) y_{i,a}
 *                + sum_l (I^k (x) F2 (x) I^{i-k}) y_{i+1,(..,l,a_k-1-l,..)} = 0
 * with B_{i,r} = I^{(x)r} (x) F1 (x) I^{(x)(i-r)} and k the first nonzero index of a.
 */
inline EmbeddedSystem assemble(const QuadraticSystem& sys, EmbeddingLayout layout) {
  const Eigen::Index n = sys.n();
  if (layout.n != n) throw Error(ErrorKind::invalid_argument, "layout dimension does not match the system");
  const int c = layout.order_c;
  std::vector<Triplet> triplets;
  Vector b = Vector::Zero(layout.total_dim_n);

  const Eigen::Index y0 = layout.offsets[0];
  detail::emit_kron(sys.f1(), 1, 1, y0, y0, triplets);
  b.segment(y0, n) = -sys.f0();
  for (std::size_t pos = 1; pos < layout.size(); ++pos) {
    const TermIndex& t = layout.terms[pos];
    if (t.level != 1) break;
    if (t.split_r.value_or(0) != 0) continue;
    detail::emit_kron(sys.f2(), 1, 1, y0, layout.offsets[pos], triplets);
  }

  for (std::size_t pos = 1; pos < layout.size(); ++pos) {
    const TermIndex& t = layout.terms[pos];
    const Eigen::Index row0 = layout.offsets[pos];
    const int i = t.level;
    if (t.split_r) {
      const int r = *t.split_r;
      detail::emit_kron(sys.f1(), detail::int_pow(n, r), detail::int_pow(n, i - r), row0, row0, triplets);
      if (r < i) {
        const auto next = layout.find(split_term(i, r + 1));
        if (!next) throw Error(ErrorKind::missing_column, "split chain is incomplete at level " + std::to_string(i));
        detail::emit_identity(layout.block_dims[pos], row0, layout.offsets[*next], triplets);
      } else {
        b.segment(row0, layout.block_dims[pos]) = -detail::kron_power(sys.f0(), i + 1);
      }
      continue;
    }
    int k = 0;
    while (t.tuple[k] == 0) ++k;
    const Eigen::Index left = detail::int_pow(n, k);
    const Eigen::Index right = detail::int_pow(n, i - k);
    detail::emit_kron(sys.f1(), left, right, row0, row0, triplets);
    if (i + 1 > c) throw Error(ErrorKind::missing_column, "nonzero tuple at the top level");
    for (int l = 0; l < t.tuple[k]; ++l) {
      std::vector<int> target;
      target.reserve(i + 2);
      target.insert(target.end(), t.tuple.begin(), t.tuple.begin() + k);
      target.push_back(l);
      target.push_back(t.tuple[k] - 1 - l);
      target.insert(target.end(), t.tuple.begin() + k + 1, t.tuple.end());
      const auto col = layout.find_tuple(i + 1, target);
      if (!col) throw Error(ErrorKind::missing_column, "level-" + std::to_string(i + 1) + " tuple absent from layout");
      detail::emit_kron(sys.f2(), left, right, row0, layout.offsets[*col], triplets);
    }
  }

  EmbeddedSystem out;
  out.matrix_a.resize(layout.total_dim_n, layout.total_dim_n);
  out.matrix_a.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix_a.makeCompressed();
  out.vector_b = std::move(b);
  out.sparsity_s_a = max_row_nonzeros(out.matrix_a);
  out.layout = std::move(layout);
  return out;
}

inline EmbeddedSystem assemble(const QuadraticSystem& sys, int c) { return assemble(sys, enumerate_layout(sys.n(), c)); }

inline Vector extract_block(const Vector& solution_y, const EmbeddingLayout& layout, const TermIndex& term) {
  if (solution_y.size() != layout.total_dim_n)
    throw Error(ErrorKind::invalid_argument, "solution length does not match the layout");
  const auto pos = layout.find(term);
  if (!pos) throw Error(ErrorKind::unknown_term, "term not present in layout");
  return solution_y.segment(layout.offsets[*pos], layout.block_dims[*pos]);
}

/// The y that the recursion values induce: the exact solution of A y = b.
inline Vector pack_series(const QuadraticSystem& sys, const HomotopySeries& series, const EmbeddingLayout& layout) {
  if (series.order_c != layout.order_c) throw Error(ErrorKind::invalid_argument, "series order differs from layout order");
  Vector y(layout.total_dim_n);
  for (std::size_t pos = 0; pos < layout.size(); ++pos) {
    const TermIndex& t = layout.terms[pos];
    Vector block;
    if (t.level == 0) {
      block = series.x_tilde;
    } else if (t.split_r) {
      block = kron(detail::kron_power(sys.f0(), *t.split_r), detail::kron_power(series.nus[0], t.level + 1 - *t.split_r));
    } else {
      block = Vector::Ones(1);
      for (int a : t.tuple) block = kron(block, series.nus[a]);
    }
    y.segment(layout.offsets[pos], layout.block_dims[pos]) = block;
  }
  return y;
}

}  // namespace qhpm

#endif  // QHPM_EMBEDDING_HPP_

#include "dignet/netgen.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dignet/rng.hpp"

namespace dignet {

GeneratorSet identity_generators(unsigned m, unsigned s) {
  if (s < 1) throw std::invalid_argument("identity_generators: s must be >= 1");
  GeneratorSet g{m, s, {}};
  g.mats.assign(s, BitMatrix::identity(m));
  return g;
}

GeneratorSet random_generators(unsigned m, unsigned s, Rng& rng) {
  if (s < 1) throw std::invalid_argument("random_generators: s must be >= 1");
  GeneratorSet g{m, s, {}};
  g.mats.reserve(s);
  for (unsigned j = 0; j < s; ++j) g.mats.push_back(BitMatrix::random(m, m, rng));
  return g;
}

GeneratorSet random_generators(unsigned m, unsigned s, std::uint64_t seed) {
  Rng rng(seed);
  return random_generators(m, s, rng);
}

GeneratorSet classic3_generators(unsigned m) {
  GeneratorSet g{m, 3, {}};
  g.mats.push_back(BitMatrix::identity(m));
  // binomial(c-1, l-1) mod 2 == 1 iff (l-1) is a submask of (c-1)
  BitMatrix pascal(m, m);
  for (unsigned l = 0; l < m; ++l)
    for (unsigned c = l; c < m; ++c)
      if ((l & c) == l) pascal.set(l, c, true);
  g.mats.push_back(std::move(pascal));
  BitMatrix rev(m, m);
  for (unsigned l = 0; l < m; ++l) rev.set(l, m - 1 - l, true);
  g.mats.push_back(std::move(rev));
  return g;
}

GeneratorSet find_base3(unsigned m, std::uint64_t seed, unsigned budget) {
  GeneratorSet classic = classic3_generators(m);
  if (t_value(classic) <= 1) return classic;
  Rng rng(seed);
  for (unsigned i = 0; i < budget; ++i) {
    GeneratorSet cand = random_generators(m, 3, rng);
    if (t_value(cand) <= 1) return cand;
  }
  throw std::runtime_error(
      "find_base3: no t<=1 base found within budget; supply one via file");
}

GeneratorSet embed_counterexample(const GeneratorSet& base) {
  if (base.s != 3)
    throw std::invalid_argument("embed_counterexample: base must have s = 3");
  unsigned m = base.m + 1;
  if (m % 2 != 0)
    throw std::invalid_argument("embed_counterexample: target size m must be even");
  if (t_value(base) > 1)
    throw std::invalid_argument("embed_counterexample: base t exceeds 1");
  unsigned r = m / 2;  // 1-based position of the inserted unit row/column
  GeneratorSet out{m, 3, {}};
  for (unsigned j = 0; j < 3; ++j) {
    const BitMatrix& b = base.mat(j);
    BitMatrix c(m, m);
    for (unsigned i = 0; i < m; ++i) {
      if (i == r - 1) {
        c.set(i, r - 1, true);
        continue;
      }
      unsigned bi = i < r - 1 ? i : i - 1;
      for (unsigned col = 0; col < m; ++col) {
        if (col == r - 1) continue;
        unsigned bc = col < r - 1 ? col : col - 1;
        c.set(i, col, b.get(bi, bc));
      }
    }
    out.mats.push_back(std::move(c));
  }
  return out;
}

namespace {

// Forward-only elimination stack: rows reduced against existing pivots,
// appended when independent. Backtracking truncates.
class ElimStack {
public:
  // Returns false when the row reduces to zero (dependent).
  bool push(BitVector row) {
    for (const auto& [col, prow] : pivots_)
      if (row.get(col)) row.xor_with(prow);
    if (!row.any()) return false;
    std::size_t col = 0;
    while (!row.get(col)) ++col;
    pivots_.emplace_back(col, std::move(row));
    return true;
  }
  std::size_t depth() const { return pivots_.size(); }
  void truncate(std::size_t n) { pivots_.resize(n); }

private:
  std::vector<std::pair<std::size_t, BitVector>> pivots_;
};

// True iff every composition (q_1..q_s) of d has a full-row-rank stack.
bool all_compositions_full_rank(const GeneratorSet& g, unsigned d) {
  ElimStack elim;
  // Depth-first over coordinates; rows of C_j pushed one at a time so
  // sibling compositions share the prefix elimination.
  auto dfs = [&](auto&& self, unsigned j, unsigned remaining) -> bool {
    if (j == g.s - 1) {
      if (remaining > g.m) return true;  // no valid composition down this branch
      std::size_t mark = elim.depth();
      bool ok = true;
      for (unsigned q = 1; q <= remaining && ok; ++q)
        ok = elim.push(g.mat(j).row(q - 1));
      elim.truncate(mark);
      return ok;
    }
    std::size_t mark = elim.depth();
    unsigned max_q = remaining < g.m ? remaining : g.m;
    bool ok = self(self, j + 1, remaining);  // q_j = 0
    for (unsigned q = 1; q <= max_q && ok; ++q) {
      if (!elim.push(g.mat(j).row(q - 1))) { ok = false; break; }
      ok = self(self, j + 1, remaining - q);
    }
    elim.truncate(mark);
    return ok;
  };
  return dfs(dfs, 0, d);
}

void next_composition(std::vector<unsigned>& q, unsigned d, bool& done) {
  // Lexicographic successor among nonnegative tuples summing to d.
  unsigned s = static_cast<unsigned>(q.size());
  for (unsigned i = s - 1; i-- > 0;) {
    if (q[i] == 0) continue;
    --q[i];
    unsigned rest = 1;
    for (unsigned k = i + 1; k < s; ++k) { rest += q[k]; q[k] = 0; }
    q[i + 1] = rest;
    return;
  }
  done = true;
  (void)d;
}

bool all_compositions_full_rank_plain(const GeneratorSet& g, unsigned d) {
  std::vector<unsigned> q(g.s, 0);
  q[0] = d;
  bool done = false;
  while (!done) {
    bool valid = true;
    for (unsigned v : q) if (v > g.m) { valid = false; break; }
    if (valid) {
      BitMatrix stacked(d, g.m);
      std::size_t r = 0;
      for (unsigned j = 0; j < g.s; ++j)
        for (unsigned i = 0; i < q[j]; ++i) stacked.set_row(r++, g.mat(j).row(i));
      if (rank(std::move(stacked)) != d) return false;
    }
    next_composition(q, d, done);
  }
  return true;
}

template <typename Check>
unsigned t_value_with(const GeneratorSet& g, Check check) {
  for (unsigned d = g.m; d > 0; --d)
    if (check(g, d)) return g.m - d;
  return g.m;  // d = 0 always passes
}

}  // namespace

unsigned t_value(const GeneratorSet& gens) {
  return t_value_with(gens, all_compositions_full_rank);
}

unsigned t_value_plain(const GeneratorSet& gens) {
  return t_value_with(gens, all_compositions_full_rank_plain);
}

namespace {

BitMatrix leading_rows(const BitMatrix& c, unsigned l) {
  BitMatrix out(l, c.cols());
  for (unsigned i = 0; i < l; ++i) out.set_row(i, c.row(i));
  return out;
}

}  // namespace

unsigned triple_intersection_rank(const GeneratorSet& gens,
                                  unsigned l1, unsigned l2, unsigned l3) {
  if (gens.s != 3) throw std::invalid_argument("triple_intersection_rank: s must be 3");
  BitMatrix i12 = intersect_row_spaces(row_space_basis(leading_rows(gens.mat(0), l1)),
                                       row_space_basis(leading_rows(gens.mat(1), l2)));
  BitMatrix i123 = intersect_row_spaces(i12, row_space_basis(leading_rows(gens.mat(2), l3)));
  return static_cast<unsigned>(i123.rows());
}

TripleQuality big_t_value(const GeneratorSet& gens) {
  if (gens.s != 3) throw std::invalid_argument("big_t_value: s must be 3");
  unsigned m = gens.m;
  TripleQuality q;
  if (m == 0) return q;
  // Prefix row-space bases once per coordinate and depth.
  std::vector<std::vector<BitMatrix>> basis(3);
  for (unsigned j = 0; j < 3; ++j) {
    basis[j].resize(m + 1);
    for (unsigned l = 1; l <= m; ++l)
      basis[j][l] = row_space_basis(leading_rows(gens.mat(j), l));
  }
  std::vector<std::vector<BitMatrix>> i12(m + 1, std::vector<BitMatrix>(m + 1));
  for (unsigned l1 = 1; l1 <= m; ++l1)
    for (unsigned l2 = 1; l2 <= m; ++l2)
      i12[l1][l2] = intersect_row_spaces(basis[0][l1], basis[1][l2]);
  // Scan sums upward; row spaces only grow with l, so the first nontrivial
  // sum is minimal.
  for (unsigned sum = 3; sum <= 3 * m; ++sum) {
    for (unsigned l1 = 1; l1 <= m; ++l1) {
      if (sum < l1 + 2 || sum > l1 + 2 * m) continue;
      for (unsigned l2 = 1; l2 <= m; ++l2) {
        if (sum < l1 + l2 + 1 || sum > l1 + l2 + m) continue;
        unsigned l3 = sum - l1 - l2;
        if (i12[l1][l2].rows() == 0) continue;
        BitMatrix tri = intersect_row_spaces(i12[l1][l2], basis[2][l3]);
        if (tri.rows() > 0) {
          q.minimal_nontrivial_sum = sum;
          q.witness = {l1, l2, l3};
          long t = 2 * static_cast<long>(m) - static_cast<long>(sum) + 1;
          q.T = t > 0 ? static_cast<unsigned>(t) : 0;
          return q;
        }
      }
    }
  }
  return q;  // every admissible triple intersection is trivial
}

std::string serialize_generators(const GeneratorSet& gens) {
  std::ostringstream out;
  out << "dignet v1 m=" << gens.m << " s=" << gens.s << "\n";
  for (unsigned j = 0; j < gens.s; ++j) {
    if (j > 0) out << "\n";
    for (unsigned r = 0; r < gens.m; ++r) out << gens.mat(j).row(r).to_string() << "\n";
  }
  return out.str();
}

GeneratorSet parse_generators(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("generator file: missing header line");
  unsigned m = 0, s = 0;
  if (std::sscanf(line.c_str(), "dignet v1 m=%u s=%u", &m, &s) != 2)
    throw std::runtime_error("generator file: bad header '" + line + "'");
  if (s < 1) throw std::runtime_error("generator file: s must be >= 1");
  GeneratorSet g{m, s, {}};
  std::size_t lineno = 1;
  for (unsigned j = 0; j < s; ++j) {
    if (j > 0) {
      // one blank separator line between matrices
      if (!std::getline(in, line))
        throw std::runtime_error("generator file: truncated before matrix " +
                                 std::to_string(j + 1));
      ++lineno;
      if (!line.empty())
        throw std::runtime_error("generator file: line " + std::to_string(lineno) +
                                 ": expected blank separator");
    }
    BitMatrix c(m, m);
    for (unsigned r = 0; r < m; ++r) {
      if (!std::getline(in, line))
        throw std::runtime_error("generator file: truncated in matrix " +
                                 std::to_string(j + 1));
      ++lineno;
      if (line.size() != m)
        throw std::runtime_error("generator file: line " + std::to_string(lineno) +
                                 ": expected " + std::to_string(m) + " digits, got " +
                                 std::to_string(line.size()));
      for (unsigned col = 0; col < m; ++col) {
        if (line[col] == '1') c.set(r, col, true);
        else if (line[col] != '0')
          throw std::runtime_error("generator file: line " + std::to_string(lineno) +
                                   ": field " + std::to_string(col + 1) +
                                   ": expected 0 or 1");
      }
    }
    g.mats.push_back(std::move(c));
  }
  return g;
}

void save_generators(const GeneratorSet& gens, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_generators: cannot open " + path);
  out << serialize_generators(gens);
  if (!out) throw std::runtime_error("save_generators: write failed for " + path);
}

GeneratorSet load_generators(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_generators: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_generators(buf.str());
}

}  // namespace dignet

#include "thermoshift/bimodule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoshift/errors.hpp"
#include "thermoshift/numeric.hpp"

namespace thermoshift {

namespace {

constexpr double kZeroTol = 1e-12;

void check_same_shape(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.blocks.size() != b.blocks.size())
    throw ValidationError("algebra elements have different block counts");
  for (std::size_t s = 0; s < a.blocks.size(); ++s)
    if (a.blocks[s].rows() != b.blocks[s].rows())
      throw ValidationError("algebra elements have different block sizes");
}

}  // namespace

int MultiMatrixAlgebra::total_dim() const {
  int t = 0;
  for (int n : block_sizes) t += n * n;
  return t;
}

AlgebraElement AlgebraElement::zero(const MultiMatrixAlgebra& alg) {
  AlgebraElement a;
  for (int n : alg.block_sizes) a.blocks.push_back(Eigen::MatrixXcd::Zero(n, n));
  return a;
}

AlgebraElement AlgebraElement::identity(const MultiMatrixAlgebra& alg) {
  AlgebraElement a;
  for (int n : alg.block_sizes) a.blocks.push_back(Eigen::MatrixXcd::Identity(n, n));
  return a;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  check_same_shape(*this, o);
  AlgebraElement r = *this;
  for (std::size_t s = 0; s < blocks.size(); ++s) r.blocks[s] += o.blocks[s];
  return r;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  check_same_shape(*this, o);
  AlgebraElement r = *this;
  for (std::size_t s = 0; s < blocks.size(); ++s) r.blocks[s] -= o.blocks[s];
  return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  check_same_shape(*this, o);
  AlgebraElement r = *this;
  for (std::size_t s = 0; s < blocks.size(); ++s) r.blocks[s] *= o.blocks[s];
  return r;
}

AlgebraElement AlgebraElement::scaled(std::complex<double> c) const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks) b *= c;
  return r;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement r = *this;
  for (auto& b : r.blocks) b = b.adjoint().eval();
  return r;
}

double AlgebraElement::norm() const {
  double worst = 0.0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(b.adjoint() * b);
    worst = std::max(worst, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
  }
  return worst;
}

bool AlgebraElement::is_zero(double tol) const { return norm() <= tol; }

bool AlgebraElement::is_hermitian(double tol) const {
  return (*this - adjoint()).norm() <= tol;
}

bool AlgebraElement::is_projection(double tol) const {
  return is_hermitian(tol) && (*this * *this - *this).norm() <= tol;
}

double AlgebraElement::min_eigenvalue() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (b + b.adjoint()));
    worst = std::min(worst, es.eigenvalues().minCoeff());
  }
  return worst;
}

AlgebraElement Endomorphism::apply(const AlgebraElement& a) const {
  if (a.blocks.size() != block_sizes.size())
    throw ValidationError("endomorphism: element has the wrong block count");
  AlgebraElement out;
  for (std::size_t t = 0; t < block_sizes.size(); ++t) {
    const int nt = block_sizes[t];
    Eigen::MatrixXcd bt = Eigen::MatrixXcd::Zero(nt, nt);
    int off = 0;
    for (std::size_t s = 0; s < block_sizes.size(); ++s) {
      const int ns = block_sizes[s];
      for (int c = 0; c < multiplicities[t][s]; ++c) {
        bt.block(off, off, ns, ns) = a.blocks[s];
        off += ns;
      }
    }
    out.blocks.push_back(std::move(bt));
  }
  return out;
}

AlgebraElement Endomorphism::corner() const {
  MultiMatrixAlgebra alg{block_sizes};
  return apply(AlgebraElement::identity(alg));
}

BimoduleSystem make_bimodule_system(MultiMatrixAlgebra algebra,
                                    std::vector<std::vector<std::vector<int>>> mults) {
  const int S = int(algebra.block_sizes.size());
  if (S == 0) throw ValidationError("bimodule system: algebra needs at least one block");
  for (int n : algebra.block_sizes)
    if (n < 1) throw ValidationError("bimodule system: block sizes must be >= 1");
  if (mults.empty()) throw ValidationError("bimodule system: needs at least one endomorphism");

  BimoduleSystem sys{std::move(algebra), {}};
  for (std::size_t i = 0; i < mults.size(); ++i) {
    const auto& m = mults[i];
    if (int(m.size()) != S)
      throw ValidationError("endomorphism " + std::to_string(i + 1) +
                            ": multiplicity row count mismatch");
    for (int t = 0; t < S; ++t) {
      if (int(m[std::size_t(t)].size()) != S)
        throw ValidationError("endomorphism " + std::to_string(i + 1) +
                              ": multiplicity column count mismatch");
      int used = 0;
      for (int s = 0; s < S; ++s) {
        if (m[std::size_t(t)][std::size_t(s)] < 0)
          throw ValidationError("endomorphism: negative multiplicity");
        used += m[std::size_t(t)][std::size_t(s)] * sys.algebra.block_sizes[std::size_t(s)];
      }
      if (used > sys.algebra.block_sizes[std::size_t(t)])
        throw ValidationError("endomorphism " + std::to_string(i + 1) + ": block " +
                              std::to_string(t + 1) + " does not fit its target");
    }
    sys.endos.push_back(Endomorphism{sys.algebra.block_sizes, m});
  }
  // Faithful diagonal action: every source block must embed somewhere.
  for (int s = 0; s < S; ++s) {
    int hits = 0;
    for (const auto& e : sys.endos)
      for (int t = 0; t < S; ++t) hits += e.multiplicities[std::size_t(t)][std::size_t(s)];
    if (hits == 0)
      throw ValidationError("bimodule system: block " + std::to_string(s + 1) +
                            " is killed by every endomorphism (left action not faithful)");
  }
  return sys;
}

BimoduleSystem cuntz_krieger_system(const TransitionMatrix& A) {
  const int d = A.dim();
  MultiMatrixAlgebra alg{std::vector<int>(std::size_t(d), 1)};
  std::vector<std::vector<std::vector<int>>> mults(
      std::size_t(d), std::vector<std::vector<int>>(std::size_t(d),
                                                    std::vector<int>(std::size_t(d), 0)));
  // rho_i places the i-th minimal projection into every block t with a
  // transition i -> t.
  for (int i = 1; i <= d; ++i)
    for (int t = 1; t <= d; ++t)
      if (A.allows(i, t))
        mults[std::size_t(i - 1)][std::size_t(t - 1)][std::size_t(i - 1)] = 1;
  return make_bimodule_system(std::move(alg), std::move(mults));
}

namespace {

AlgebraElement apply_word(const BimoduleSystem& sys, AlgebraElement a, const Word& w) {
  for (int letter : w) a = sys.endos[std::size_t(letter - 1)].apply(a);
  return a;
}

}  // namespace

AlgebraElement q_word(const BimoduleSystem& sys, const Word& alpha) {
  if (alpha.empty()) return AlgebraElement::identity(sys.algebra);
  for (int letter : alpha)
    if (letter < 1 || letter > sys.rank())
      throw ValidationError("q_word: letter outside 1..d");
  AlgebraElement q = sys.endos[std::size_t(alpha[0] - 1)].corner();
  return apply_word(sys, std::move(q), Word(alpha.begin() + 1, alpha.end()));
}

bool bimodule_admissible(const BimoduleSystem& sys, const Word& alpha) {
  return !q_word(sys, alpha).is_zero(kZeroTol);
}

namespace {

void bimodule_words_rec(const BimoduleSystem& sys, int n, Word& w,
                        const AlgebraElement& q, std::vector<Word>& out) {
  if (int(w.size()) == n) {
    out.push_back(w);
    return;
  }
  for (int j = 1; j <= sys.rank(); ++j) {
    AlgebraElement qj = w.empty() ? sys.endos[std::size_t(j - 1)].corner()
                                  : sys.endos[std::size_t(j - 1)].apply(q);
    if (qj.is_zero(kZeroTol)) continue;
    w.push_back(j);
    bimodule_words_rec(sys, n, w, qj, out);
    w.pop_back();
  }
}

}  // namespace

std::vector<Word> bimodule_words(const BimoduleSystem& sys, int n) {
  if (n < 0) throw ValidationError("bimodule_words: n must be >= 0");
  std::vector<Word> out;
  if (n == 0) {
    out.push_back(Word{});
    return out;
  }
  Word w;
  bimodule_words_rec(sys, n, w, AlgebraElement::identity(sys.algebra), out);
  return out;
}

std::uint64_t bimodule_word_count(const BimoduleSystem& sys, int n) {
  return std::uint64_t(bimodule_words(sys, n).size());
}

DPotential DPotential::from_algebra(const BimoduleSystem& sys, const AlgebraElement& a) {
  (void)sys;
  DPotential p;
  p.range = 0;
  p.components[Word{}] = a;
  return p;
}

DPotential DPotential::identity(const BimoduleSystem& sys) {
  return from_algebra(sys, AlgebraElement::identity(sys.algebra));
}

DPotential diagonal_potential(const BimoduleSystem& sys, const Potential& f) {
  if (sys.rank() != f.matrix().dim())
    throw ValidationError("diagonal_potential: alphabet sizes differ");
  DPotential a;
  a.range = f.range();
  for (std::size_t i = 0; i < f.words().size(); ++i) {
    const Word& w = f.words()[i];
    const AlgebraElement q = q_word(sys, w);
    if (q.is_zero(kZeroTol)) continue;
    a.components[w] = q.scaled(f.values()[i]);
  }
  return a;
}

void validate_dpotential(const BimoduleSystem& sys, const DPotential& a) {
  if (a.range < 0) throw ValidationError("d-potential: negative range");
  if (a.range == 0) {
    if (a.components.size() != 1 || a.components.begin()->first != Word{})
      throw ValidationError("d-potential: range 0 must hold exactly the empty word");
  }
  for (const auto& [w, comp] : a.components) {
    if (int(w.size()) != a.range)
      throw ValidationError("d-potential: word '" + word_string(w) +
                            "' has the wrong length");
    if (comp.blocks.size() != sys.algebra.block_sizes.size())
      throw ValidationError("d-potential: component block count mismatch");
    if (!comp.is_hermitian(1e-12))
      throw ValidationError("d-potential: component at '" + word_string(w) +
                            "' is not self-adjoint");
    const AlgebraElement q = q_word(sys, w);
    if ((q * comp * q - comp).norm() > 1e-12)
      throw ValidationError("d-potential: component at '" + word_string(w) +
                            "' is not supported in its corner");
  }
}

AlgebraElement compress(const BimoduleSystem& sys, const DPotential& a, const Word& beta) {
  if (int(beta.size()) < a.range)
    throw ValidationError("compress: word shorter than the potential range");
  const Word gamma(beta.begin(), beta.begin() + a.range);
  const Word tail(beta.begin() + a.range, beta.end());
  const auto it = a.components.find(gamma);
  if (it == a.components.end()) return AlgebraElement::zero(sys.algebra);
  return apply_word(sys, it->second, tail);
}

DPotential compress_partial(const BimoduleSystem& sys, const DPotential& a,
                            const Word& beta) {
  if (int(beta.size()) >= a.range) {
    return DPotential::from_algebra(sys, compress(sys, a, beta));
  }
  DPotential out;
  out.range = a.range - int(beta.size());
  for (const auto& [w, comp] : a.components) {
    if (!std::equal(beta.begin(), beta.end(), w.begin())) continue;
    out.components[Word(w.begin() + int(beta.size()), w.end())] = comp;
  }
  return out;
}

DPotential promote(const BimoduleSystem& sys, const DPotential& a) {
  DPotential out;
  out.range = a.range + 1;
  for (const auto& [w, comp] : a.components) {
    for (int i = 1; i <= sys.rank(); ++i) {
      Word wi = w;
      wi.push_back(i);
      const AlgebraElement q = q_word(sys, wi);
      if (q.is_zero(kZeroTol)) continue;
      const AlgebraElement lifted = sys.endos[std::size_t(i - 1)].apply(comp);
      out.components[wi] = q * lifted * q;
    }
  }
  return out;
}

DPotential theta_apply(const BimoduleSystem& sys, const DPotential& a) {
  DPotential out;
  out.range = a.range + 1;
  for (const auto& [w, comp] : a.components) {
    for (int i = 1; i <= sys.rank(); ++i) {
      Word iw;
      iw.reserve(w.size() + 1);
      iw.push_back(i);
      iw.insert(iw.end(), w.begin(), w.end());
      const AlgebraElement q = q_word(sys, iw);
      if (q.is_zero(kZeroTol)) continue;
      out.components[iw] = q * comp * q;
    }
  }
  return out;
}

namespace {

DPotential promote_to(const BimoduleSystem& sys, DPotential a, int range) {
  while (a.range < range) a = promote(sys, a);
  return a;
}

}  // namespace

DPotential d_add(const BimoduleSystem& sys, const DPotential& a, const DPotential& b) {
  const int r = std::max(a.range, b.range);
  DPotential pa = promote_to(sys, a, r);
  DPotential pb = promote_to(sys, b, r);
  DPotential out;
  out.range = r;
  for (const auto& [w, comp] : pa.components) out.components[w] = comp;
  for (const auto& [w, comp] : pb.components) {
    const auto it = out.components.find(w);
    if (it == out.components.end())
      out.components[w] = comp;
    else
      it->second = it->second + comp;
  }
  return out;
}

DPotential d_multiply(const BimoduleSystem& sys, const DPotential& a, const DPotential& b) {
  const int r = std::max(a.range, b.range);
  DPotential pa = promote_to(sys, a, r);
  DPotential pb = promote_to(sys, b, r);
  DPotential out;
  out.range = r;
  for (const auto& [w, comp] : pa.components) {
    const auto it = pb.components.find(w);
    if (it == pb.components.end()) continue;
    out.components[w] = comp * it->second;
  }
  return out;
}

double d_norm(const DPotential& a) {
  double worst = 0.0;
  for (const auto& [w, comp] : a.components) worst = std::max(worst, comp.norm());
  return worst;
}

DPotential d_scale(const DPotential& a, double c) {
  DPotential out = a;
  for (auto& [w, comp] : out.components) comp = comp.scaled(c);
  return out;
}

DPotential birkhoff_D(const BimoduleSystem& sys, const DPotential& a, int n) {
  if (n < 1) throw ValidationError("birkhoff_D: n must be >= 1");
  DPotential total = a;
  DPotential term = a;
  for (int j = 1; j < n; ++j) {
    term = theta_apply(sys, term);
    total = d_add(sys, total, term);
  }
  return promote_to(sys, total, a.range + n - 1);
}

namespace {

void check_corner_sum(const BimoduleSystem& sys) {
  AlgebraElement s = AlgebraElement::zero(sys.algebra);
  for (const auto& e : sys.endos) s = s + e.corner();
  if (s.min_eigenvalue() <= kZeroTol)
    throw ValidationError("theorem62: sum of corner projections is not invertible");
}

}  // namespace

double log_theorem62_partition(const BimoduleSystem& sys, const DPotential& a, int n) {
  if (n < 1) throw ValidationError("theorem62_partition: n must be >= 1");
  check_corner_sum(sys);
  const DPotential birk = birkhoff_D(sys, a, n);  // range = a.range + n - 1
  LogSumExp lse;
  for (const Word& alpha : bimodule_words(sys, n - 1)) {
    // ||x_alpha^* a^{(n)} x_alpha|| is the max of the corner-supported
    // component norms over the extensions of alpha to the full range.
    double best = 0.0;
    bool any = false;
    for (const auto& [w, comp] : birk.components) {
      if (!std::equal(alpha.begin(), alpha.end(), w.begin())) continue;
      best = std::max(best, comp.norm());
      any = true;
    }
    if (!any) continue;
    lse.add(best);
  }
  return lse.log_sum();
}

double theorem62_partition(const BimoduleSystem& sys, const DPotential& a, int n) {
  return std::exp(log_theorem62_partition(sys, a, n));
}

double bimodule_topological_entropy(const BimoduleSystem& sys) {
  // Finite automaton over the distinct corner projections of the
  // q-recursion; canonical embeddings keep every q diagonal 0/1.
  const auto key_of = [&](const AlgebraElement& q) {
    std::vector<std::uint8_t> key;
    for (const auto& b : q.blocks)
      for (Eigen::Index i = 0; i < b.rows(); ++i)
        key.push_back(b(i, i).real() > 0.5 ? 1 : 0);
    return key;
  };
  std::map<std::vector<std::uint8_t>, int> ids;
  std::vector<AlgebraElement> reps;
  std::vector<int> queue;
  const auto intern = [&](const AlgebraElement& q) {
    const auto key = key_of(q);
    const auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const int id = int(reps.size());
    ids.emplace(key, id);
    reps.push_back(q);
    queue.push_back(id);
    return id;
  };
  for (int i = 1; i <= sys.rank(); ++i) {
    const AlgebraElement q = sys.endos[std::size_t(i - 1)].corner();
    if (!q.is_zero(kZeroTol)) intern(q);
  }
  std::vector<std::pair<int, int>> edges;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int id = queue[head];
    for (int j = 1; j <= sys.rank(); ++j) {
      const AlgebraElement qj = sys.endos[std::size_t(j - 1)].apply(reps[std::size_t(id)]);
      if (qj.is_zero(kZeroTol)) continue;
      edges.emplace_back(id, intern(qj));
    }
  }
  const int S = int(reps.size());
  if (S == 0) throw ValidationError("bimodule entropy: no admissible letters");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(S, S);
  for (const auto& [from, to] : edges) B(from, to) += 1.0;
  return std::log(std::max(nonnegative_radius(B), 1e-300));
}

PressureEstimate theorem62_pressure(const BimoduleSystem& sys, const DPotential& a,
                                    int n_max) {
  if (n_max < 2) throw ValidationError("theorem62_pressure: n_max must be >= 2");
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& [w, comp] : a.components)
    min_eig = std::min(min_eig, comp.min_eigenvalue());
  if (min_eig < -1e-12)
    throw ValidationError("theorem62_pressure: the element must be positive");
  check_corner_sum(sys);

  const double h_top = bimodule_topological_entropy(sys);
  const double norm_a = d_norm(a);
  const double pad = 1e-12;

  PressureEstimate est;
  est.n_max = n_max;
  double upper = norm_a + h_top;
  const double lower = h_top;
  for (int n = 1; n <= n_max; ++n) {
    const double log_t = log_theorem62_partition(sys, a, n);
    // The shifted sums s_j = t_{j+1} are submultiplicative, so every
    // (1/(n-1)) log t_n bounds the limit from above.
    if (n >= 2) upper = std::min(upper, log_t / double(n - 1));
    est.per_n.push_back(PressureEstimate::Row{n, log_t / double(n),
                                              lower - pad, upper + pad});
  }
  est.lower = lower - pad;
  est.upper = upper + pad;
  return est;
}

CommutationReport check_commutation(const BimoduleSystem& sys, const DPotential& a,
                                    int max_length) {
  CommutationReport rep;
  for (int len = 1; len <= max_length; ++len) {
    double worst_compress = 0.0;
    double worst_corner = 0.0;
    for (const Word& alpha : bimodule_words(sys, len)) {
      const DPotential c = compress_partial(sys, a, alpha);
      const DPotential q = DPotential::from_algebra(sys, q_word(sys, alpha));
      const DPotential ca = d_multiply(sys, a, c);
      const DPotential ac = d_multiply(sys, c, a);
      worst_compress =
          std::max(worst_compress, d_norm(d_add(sys, ca, d_scale(ac, -1.0))));
      const DPotential qa = d_multiply(sys, a, q);
      const DPotential aq = d_multiply(sys, q, a);
      worst_corner = std::max(worst_corner, d_norm(d_add(sys, qa, d_scale(aq, -1.0))));
    }
    rep.per_length.push_back(CommutationReport::Row{len, worst_compress, worst_corner});
  }
  for (int p = 1; p <= max_length; ++p) {
    bool ok = true;
    for (int len = p; len <= max_length; ++len) {
      const auto& row = rep.per_length[std::size_t(len - 1)];
      ok = ok && row.comm_compress <= kZeroTol && row.comm_corner <= kZeroTol;
    }
    if (ok) {
      rep.stable_from = p;
      break;
    }
  }
  return rep;
}

}  // namespace thermoshift

#ifndef THERMOSHIFT_BIMODULE_HPP
#define THERMOSHIFT_BIMODULE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/sft.hpp"

namespace thermoshift {

// Multimatrix coefficient algebra: a direct sum of full matrix blocks.
struct MultiMatrixAlgebra {
  std::vector<int> block_sizes;
  int total_dim() const;
};

// One element per block.
struct AlgebraElement {
  std::vector<Eigen::MatrixXcd> blocks;

  static AlgebraElement zero(const MultiMatrixAlgebra& alg);
  static AlgebraElement identity(const MultiMatrixAlgebra& alg);

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement scaled(std::complex<double> c) const;
  AlgebraElement adjoint() const;
  double norm() const;  // operator norm, largest singular value per block
  bool is_zero(double tol = 1e-12) const;
  bool is_hermitian(double tol = 1e-12) const;
  bool is_projection(double tol = 1e-12) const;
  double min_eigenvalue() const;  // over Hermitian blocks
};

// Endomorphism given by a row of Bratteli multiplicities per target block,
// realized as the canonical ordered block-diagonal embedding. rho(I) is the
// diagonal corner projection.
struct Endomorphism {
  std::vector<int> block_sizes;                 // of the ambient algebra
  std::vector<std::vector<int>> multiplicities;  // [target][source]

  AlgebraElement apply(const AlgebraElement& a) const;
  AlgebraElement corner() const;  // rho(I)
};

struct BimoduleSystem {
  MultiMatrixAlgebra algebra;
  std::vector<Endomorphism> endos;
  int rank() const { return int(endos.size()); }
};

// Validates embedding fit and faithfulness of the diagonal left action.
BimoduleSystem make_bimodule_system(MultiMatrixAlgebra algebra,
                                    std::vector<std::vector<std::vector<int>>> mults);

// The commutative system whose word structure reproduces the Markov
// subshift of A: one scalar block per letter, rho_i supported on row i.
BimoduleSystem cuntz_krieger_system(const TransitionMatrix& A);

// q_alpha by the corner recursion; alpha is admissible iff q_alpha != 0.
AlgebraElement q_word(const BimoduleSystem& sys, const Word& alpha);
bool bimodule_admissible(const BimoduleSystem& sys, const Word& alpha);

// Admissible words of length n (n = 0 gives the empty word).
std::vector<Word> bimodule_words(const BimoduleSystem& sys, int n);
std::uint64_t bimodule_word_count(const BimoduleSystem& sys, int n);

// Element of the diagonal subalgebra presented by a table over admissible
// range-words; range 0 is a plain coefficient-algebra element.
struct DPotential {
  int range = 0;
  std::map<Word, AlgebraElement> components;

  static DPotential from_algebra(const BimoduleSystem& sys, const AlgebraElement& a);
  static DPotential identity(const BimoduleSystem& sys);
};

// Diagonal potential from a classical locally constant f on Lambda_A, for
// the Cuntz-Krieger system of the same matrix.
DPotential diagonal_potential(const BimoduleSystem& sys, const Potential& f);

// Validates component shape, self-adjointness and the corner support
// condition.
void validate_dpotential(const BimoduleSystem& sys, const DPotential& a);

// x_beta^* a x_beta for |beta| >= range, an element of the coefficient
// algebra.
AlgebraElement compress(const BimoduleSystem& sys, const DPotential& a, const Word& beta);

// The same compression for short beta, which lands back in the diagonal
// subalgebra with range reduced by |beta|.
DPotential compress_partial(const BimoduleSystem& sys, const DPotential& a,
                            const Word& beta);

// Range bump through the basis insertion identity; represents the same
// element.
DPotential promote(const BimoduleSystem& sys, const DPotential& a);

// theta(a) = sum_i x_i a x_i^*, range + 1.
DPotential theta_apply(const BimoduleSystem& sys, const DPotential& a);

// sum_{j<n} theta^j(a), all summands promoted to the common range.
DPotential birkhoff_D(const BimoduleSystem& sys, const DPotential& a, int n);

// D-algebra helpers on the common range promotion.
DPotential d_add(const BimoduleSystem& sys, const DPotential& a, const DPotential& b);
DPotential d_multiply(const BimoduleSystem& sys, const DPotential& a, const DPotential& b);
DPotential d_scale(const DPotential& a, double c);
double d_norm(const DPotential& a);

// Partition value of the pressure formula at stage n:
// sum over admissible (n-1)-words of exp ||x_alpha^* a^{(n)} x_alpha||.
double theorem62_partition(const BimoduleSystem& sys, const DPotential& a, int n);
double log_theorem62_partition(const BimoduleSystem& sys, const DPotential& a, int n);

// Growth rate of admissible word counts, from the finite projection
// automaton of the q-recursion.
double bimodule_topological_entropy(const BimoduleSystem& sys);

// Pressure estimate for positive a: Fekete upper bounds of the subadditive
// partition sums with the bracket [h_top, ||a|| + h_top] attached.
PressureEstimate theorem62_pressure(const BimoduleSystem& sys, const DPotential& a,
                                    int n_max);

struct CommutationReport {
  struct Row {
    int length = 0;
    double comm_compress = 0.0;  // max ||[a, x_alpha^* a x_alpha]||
    double comm_corner = 0.0;    // max ||[a, q_alpha]||
  };
  std::vector<Row> per_length;
  std::optional<int> stable_from;  // smallest p with both zero for p..L
};
CommutationReport check_commutation(const BimoduleSystem& sys, const DPotential& a,
                                    int max_length);

}  // namespace thermoshift

#endif

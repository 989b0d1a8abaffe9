#ifndef THERMOSHIFT_SFT_HPP
#define THERMOSHIFT_SFT_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace thermoshift {

// Letters run 1..d. A word is a finite nonempty sequence of letters;
// vector ordering gives the lexicographic order used for all
// cylinder-indexed data.
using Word = std::vector<int>;

std::string word_string(const Word& w);
Word word_from_string(const std::string& s);

// 0/1 transition matrix with no row or column identically zero.
class TransitionMatrix {
 public:
  static TransitionMatrix validate(const std::vector<std::vector<int>>& raw);
  static TransitionMatrix full_shift(int d);

  int dim() const { return d_; }
  bool allows(int i, int j) const { return entries_[std::size_t((i - 1) * d_ + (j - 1))] != 0; }
  Eigen::MatrixXd dense() const;
  bool operator==(const TransitionMatrix& o) const {
    return d_ == o.d_ && entries_ == o.entries_;
  }

 private:
  TransitionMatrix(int d, std::vector<std::uint8_t> entries)
      : d_(d), entries_(std::move(entries)) {}
  int d_;
  std::vector<std::uint8_t> entries_;
};

bool admissible(const TransitionMatrix& A, const Word& w);

// All admissible words of length n in lexicographic order.
std::vector<Word> admissible_words(const TransitionMatrix& A, int n);

// Streaming enumeration in lexicographic order; the variant restricted to a
// fixed first letter partitions the language for parallel consumers.
void for_each_admissible_word(const TransitionMatrix& A, int n,
                              const std::function<void(const Word&)>& fn);
void for_each_admissible_word_from(const TransitionMatrix& A, int first_letter, int n,
                                   const std::function<void(const Word&)>& fn);

// Number of admissible n-words. Saturates at the largest uint64 on overflow.
std::uint64_t word_count(const TransitionMatrix& A, int n);

// Smallest N with (A^N)_{ij} > 0 for all i,j, searched up to the Wielandt
// bound (d-1)^2 + 1. Absent when A is not primitive.
std::optional<int> aperiodicity_index(const TransitionMatrix& A);

struct SpectralReport {
  double radius = 0.0;
  int iterations = 0;
  double residual = 0.0;
  // Perron right eigenvector, ||v||_1 = 1, present when A is aperiodic.
  std::optional<Eigen::VectorXd> eigenvector;
};

// Perron root by power iteration. Periodic irreducible input is handled by
// iterating on (A+I)/2 and undoing the shift; the eigenvector is reported
// only for aperiodic matrices.
SpectralReport spectral_radius(const TransitionMatrix& A, double tol = 1e-12,
                               int max_iter = 10000);

// Recoding to the alphabet of admissible k-words. Transition alpha -> beta
// iff beta = (alpha shifted left) + one admissibly appended letter.
struct HigherBlock {
  TransitionMatrix matrix;
  std::vector<Word> states;  // lexicographic; state i+1 <-> states[i]
  int index_of(const Word& w) const;  // 1-based state, 0 when absent
};
HigherBlock higher_block(const TransitionMatrix& A, int k);

struct LabeledGraph {
  struct Edge {
    int from = 0;
    int to = 0;
    std::string label;
  };
  int vertices = 0;
  std::vector<Edge> edges;
};

// Edge SFT covering a sofic shift given by a right-resolving presentation.
// Edge shift letters are the edges (input order); edge_label maps each edge
// letter to a sofic symbol 1..label_names.size() (first-appearance order).
struct SoficCover {
  TransitionMatrix matrix;
  std::vector<int> edge_label;
  std::vector<std::string> label_names;
};
SoficCover sofic_cover(const LabeledGraph& g);

}  // namespace thermoshift

#endif

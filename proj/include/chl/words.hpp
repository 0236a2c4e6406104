#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace chl {

// A symbol sequence over the two-letter alphabet {1, 2}.
struct Word {
  std::vector<int> digits;

  explicit Word(std::vector<int> d);
  int length() const { return static_cast<int>(digits.size()); }
};

Word word_from_string(const std::string& s);
std::string word_to_string(const Word& w);

// Parameter bundle tying the semiclassical scale to the word lengths.
struct WordParams {
  double h = 0.0;
  double eps0 = 0.0;
  double alpha = 0.0;
  int N0 = 0;
  int N1 = 0;

  WordParams(double h, double eps0, double alpha);
};

// N0 = ceil((1 - eps0)/6 * log(1/h)) clamped to >= 1, and N1 = 2*N0.
std::pair<int, int> propagation_times(double h, double eps0);

// Fraction of digits equal to 1, as an exact rational.
mpq_class density(const Word& w);

enum class ShortClass { Z, Z_complement };
enum class LongClass { X, Y };

// A length-N0 word is in Z exactly when its 1-digit density is >= alpha,
// compared exactly as rationals (ties land in Z).
ShortClass classify_short(const Word& w, double alpha, int N0);

// A length-4*N0 word splits into 4 blocks of length N0; it is in X exactly
// when every block is in Z_complement, otherwise in Y.
LongClass classify_long(const Word& w, double alpha, int N0);

struct CountSets {
  mpz_class size_Z;
  mpz_class size_Zc;
  mpz_class size_X;
  mpz_class size_Y;
};

// Exact cardinalities via binomial sums: size_Zc counts length-N0 words with
// 1-digit count strictly below alpha*N0, size_X = size_Zc^4, and
// size_Z + size_Zc = 2^N0, size_X + size_Y = 2^(4*N0).
CountSets count_sets(int N0, double alpha);

// Independent cross-check path: enumerate all length-4*N0 words as bit
// patterns and histogram the maximum per-block 1-digit count; entry m counts
// the words whose largest block count equals m.  size_X for a threshold alpha
// is then the sum over m with m < alpha*N0.
std::vector<mpz_class> enumerate_max_block_histogram(int N0);

// Sum of histogram entries strictly below alpha*N0 (exact comparison).
mpz_class histogram_size_X(const std::vector<mpz_class>& hist, int N0, double alpha);

struct SplitWord {
  Word plus;   // first half; indexed from its far end (digit 1 = last)
  Word minus;  // second half; indexed from its front (digit 0 = first)

  // 1-based index counting backwards from the end of the first half.
  int plus_digit(int j) const;
  // 0-based index counting forwards from the start of the second half.
  int minus_digit(int j) const;
};

// Splits an even-length word into equal halves.
SplitWord split_word(const Word& w);

struct CountBoundSample {
  double h = 0.0;
  int N0 = 0;
  mpz_class size_X;
  double C = 0.0;  // size_X * h^(beta/2), evaluated through logarithms
};

struct CountBoundReport {
  std::vector<CountBoundSample> samples;
  double C_empirical = 0.0;  // max of the per-sample constants
  int argmax_index = 0;
  bool tail_nonincreasing = false;  // from the maximal sample onward
  bool bounded = false;             // last few constants are not strictly increasing
};

// Evaluates the empirical constant in size_X <= C * h^(-beta/2) over a
// strictly decreasing grid of scales.
CountBoundReport check_count_bound(double beta, double alpha, double eps0,
                                   const std::vector<double>& h_grid);

}  // namespace chl

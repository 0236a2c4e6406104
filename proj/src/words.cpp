#include "chl/words.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace chl {

namespace {

mpq_class exact_fraction(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

Word::Word(std::vector<int> d) : digits(std::move(d)) {
  if (digits.empty()) throw std::invalid_argument("a word must be nonempty");
  for (int x : digits) {
    if (x != 1 && x != 2) throw std::invalid_argument("word digits must be 1 or 2");
  }
}

Word word_from_string(const std::string& s) {
  std::vector<int> d;
  d.reserve(s.size());
  for (char c : s) {
    if (c != '1' && c != '2') throw std::invalid_argument("word digits must be 1 or 2");
    d.push_back(c - '0');
  }
  return Word(std::move(d));
}

std::string word_to_string(const Word& w) {
  std::string s;
  s.reserve(w.digits.size());
  for (int x : w.digits) s.push_back(static_cast<char>('0' + x));
  return s;
}

std::pair<int, int> propagation_times(double h, double eps0) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h must lie in (0,1)");
  if (!(eps0 > 0.0 && eps0 < 0.25)) {
    throw std::invalid_argument("the slack parameter must lie in (0, 1/4)");
  }
  // The small backoff keeps ceil() from bumping an exactly-integer argument
  // whose floating-point image landed a few ulps above the integer.
  double raw = (1.0 - eps0) / 6.0 * std::log(1.0 / h);
  int N0 = static_cast<int>(std::ceil(raw - 1e-9));
  if (N0 < 1) N0 = 1;
  return {N0, 2 * N0};
}

WordParams::WordParams(double h_, double eps0_, double alpha_)
    : h(h_), eps0(eps0_), alpha(alpha_) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("the density threshold must lie in (0,1)");
  }
  auto [n0, n1] = propagation_times(h, eps0);
  N0 = n0;
  N1 = n1;
}

mpq_class density(const Word& w) {
  long ones = 0;
  for (int x : w.digits) ones += (x == 1) ? 1 : 0;
  mpq_class q(ones, w.length());
  q.canonicalize();
  return q;
}

ShortClass classify_short(const Word& w, double alpha, int N0) {
  if (w.length() != N0) throw std::invalid_argument("short word length must equal N0");
  return density(w) >= mpq_class(alpha) ? ShortClass::Z : ShortClass::Z_complement;
}

LongClass classify_long(const Word& w, double alpha, int N0) {
  if (w.length() != 4 * N0) {
    throw std::invalid_argument("long word length must equal 4*N0");
  }
  for (int b = 0; b < 4; ++b) {
    Word block(std::vector<int>(w.digits.begin() + b * N0,
                                w.digits.begin() + (b + 1) * N0));
    if (classify_short(block, alpha, N0) == ShortClass::Z) return LongClass::Y;
  }
  return LongClass::X;
}

CountSets count_sets(int N0, double alpha) {
  if (N0 < 1) throw std::invalid_argument("N0 must be positive");
  if (N0 > 4096) throw std::invalid_argument("N0 is too large for exact counting");
  if (!(alpha >= 0.0) || std::isnan(alpha)) {
    throw std::invalid_argument("the density threshold must be a nonnegative number");
  }
  CountSets out;
  out.size_Zc = 0;
  mpq_class threshold(alpha);
  for (int k = 0; k <= N0; ++k) {
    // k ones give density k/N0; the word is controlled when that is < alpha.
    if (exact_fraction(k, N0) < threshold) {
      mpz_class binom;
      mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(N0),
                   static_cast<unsigned long>(k));
      out.size_Zc += binom;
    }
  }
  mpz_class two_N0, two_4N0;
  mpz_ui_pow_ui(two_N0.get_mpz_t(), 2, static_cast<unsigned long>(N0));
  mpz_ui_pow_ui(two_4N0.get_mpz_t(), 2, static_cast<unsigned long>(4 * N0));
  out.size_Z = two_N0 - out.size_Zc;
  out.size_X = out.size_Zc * out.size_Zc * out.size_Zc * out.size_Zc;
  out.size_Y = two_4N0 - out.size_X;
  return out;
}

std::vector<mpz_class> enumerate_max_block_histogram(int N0) {
  if (N0 < 1 || N0 > 6) {
    throw std::invalid_argument("exhaustive enumeration is limited to N0 <= 6");
  }
  std::vector<mpz_class> hist(static_cast<std::size_t>(N0) + 1, mpz_class(0));
  std::uint64_t total = std::uint64_t{1} << (4 * N0);
  std::uint64_t block_mask = (std::uint64_t{1} << N0) - 1;
  for (std::uint64_t w = 0; w < total; ++w) {
    int worst = 0;
    for (int b = 0; b < 4; ++b) {
      int ones = std::popcount((w >> (b * N0)) & block_mask);
      if (ones > worst) worst = ones;
    }
    hist[static_cast<std::size_t>(worst)] += 1;
  }
  return hist;
}

mpz_class histogram_size_X(const std::vector<mpz_class>& hist, int N0, double alpha) {
  mpq_class threshold(alpha);
  mpz_class total = 0;
  for (std::size_t m = 0; m < hist.size(); ++m) {
    if (exact_fraction(static_cast<long>(m), N0) < threshold) total += hist[m];
  }
  return total;
}

int SplitWord::plus_digit(int j) const {
  if (j < 1 || j > plus.length()) throw std::out_of_range("index into the first half");
  return plus.digits[static_cast<std::size_t>(plus.length() - j)];
}

int SplitWord::minus_digit(int j) const {
  if (j < 0 || j >= minus.length()) throw std::out_of_range("index into the second half");
  return minus.digits[static_cast<std::size_t>(j)];
}

SplitWord split_word(const Word& w) {
  if (w.length() % 2 != 0) throw std::invalid_argument("word length must be even");
  int half = w.length() / 2;
  return SplitWord{
      Word(std::vector<int>(w.digits.begin(), w.digits.begin() + half)),
      Word(std::vector<int>(w.digits.begin() + half, w.digits.end()))};
}

CountBoundReport check_count_bound(double beta, double alpha, double eps0,
                                   const std::vector<double>& h_grid) {
  if (!(beta > 0.0)) throw std::invalid_argument("the decay exponent must be positive");
  if (h_grid.size() < 2) throw std::invalid_argument("at least two scales are required");
  for (std::size_t i = 0; i + 1 < h_grid.size(); ++i) {
    if (!(h_grid[i] > h_grid[i + 1])) {
      throw std::invalid_argument("the scale grid must be strictly decreasing");
    }
  }
  CountBoundReport report;
  for (double h : h_grid) {
    CountBoundSample s;
    s.h = h;
    s.N0 = propagation_times(h, eps0).first;
    s.size_X = count_sets(s.N0, alpha).size_X;
    if (s.size_X == 0) {
      s.C = 0.0;
    } else {
      long exp2 = 0;
      double mant = mpz_get_d_2exp(&exp2, s.size_X.get_mpz_t());
      double log_size = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
      s.C = std::exp(log_size + 0.5 * beta * std::log(h));
    }
    report.samples.push_back(std::move(s));
  }
  report.argmax_index = 0;
  for (std::size_t i = 1; i < report.samples.size(); ++i) {
    if (report.samples[i].C > report.samples[static_cast<std::size_t>(report.argmax_index)].C) {
      report.argmax_index = static_cast<int>(i);
    }
  }
  report.C_empirical = report.samples[static_cast<std::size_t>(report.argmax_index)].C;
  report.tail_nonincreasing = true;
  for (std::size_t i = static_cast<std::size_t>(report.argmax_index) + 1;
       i < report.samples.size(); ++i) {
    if (report.samples[i].C > report.samples[i - 1].C * (1.0 + 1e-12)) {
      report.tail_nonincreasing = false;
      break;
    }
  }
  std::size_t n = report.samples.size();
  std::size_t window = std::min<std::size_t>(4, n);
  bool strictly_increasing = true;
  for (std::size_t i = n - window + 1; i < n; ++i) {
    if (!(report.samples[i].C > report.samples[i - 1].C)) {
      strictly_increasing = false;
      break;
    }
  }
  report.bounded = !strictly_increasing;
  return report;
}

}  // namespace chl

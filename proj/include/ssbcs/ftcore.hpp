#pragma once

#include "ssbcs/random.hpp"
#include "ssbcs/ring_time.hpp"
#include "ssbcs/sysconfig.hpp"

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ssbcs {

class FaultBudgetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Row-major n1 x n0 grid; row p is a plane, column i an MES node.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& at(int p, int i) { return data_[index(p, i)]; }
  const T& at(int p, int i) const { return data_[index(p, i)]; }
  void fill(const T& v) { std::fill(data_.begin(), data_.end(), v); }
  bool operator==(const Grid&) const = default;

 private:
  std::size_t index(int p, int i) const {
    if (p < 0 || p >= rows_ || i < 0 || i >= cols_) throw UsageError("matrix index out of range");
    return static_cast<std::size_t>(p * cols_ + i);
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using Entry = std::optional<Tick>;
using ClockMatrix = Grid<Entry>;
using MsgMatrix = Grid<Entry>;
using AccMatrix = Grid<int>;

/// The subset of the configuration the fault-tolerant functions read.
struct FtParams {
  int n0 = 4;
  int n1 = 3;
  int f0 = 1;
  int f1 = 1;
  int a0 = 3;
  Tick tau_max = 1000;
  Tick T = 0;
  Tick eps1 = 0;
  Tick eps2 = 0;
  Tick acc_m_threshold = 0;
  Tick acc_h_threshold = 0;

  static FtParams from(const SystemConfig& cfg);
};

struct FilterResult {
  std::vector<int> p_acc;
  std::vector<int> p_maj;
  std::vector<int> p_acma;
  std::vector<Entry> majority_values;
};

std::vector<Tick> msr_reduce(std::span<const Tick> values, int f, Tick tau_max);
std::vector<Tick> msr_select(std::span<const Tick> sorted, int f);
/// Mean of circ-sorted values, measured from the first, rounded half down.
Tick circular_mean(std::span<const Tick> sorted, Tick tau_max);

/// Column medians over present entries; columns with fewer than n1 - f1
/// entries are absent.
std::vector<Entry> column_medians(const ClockMatrix& C, const FtParams& fp);
std::optional<Tick> row_median(const ClockMatrix& C, int p, Tick tau_max);

Tick fta_values(std::span<const Tick> medians, int f0, Tick tau_max);
Tick fta(const ClockMatrix& C, const FtParams& fp);
std::optional<Tick> try_fta(const ClockMatrix& C, const FtParams& fp);

/// Eq. 7 for three planes. Returns nullopt only when the FTA branch is drawn
/// and the matrix is too sparse for it.
std::optional<Tick> rft(const ClockMatrix& C, Tick c_pre, const Rational& p0, Rng& rng,
                        const FtParams& fp, bool* took_fta = nullptr);

bool accuracy_check(Tick m_curr, Tick m_pre, Tick h_curr, Tick h_pre, const FtParams& fp);
int update_acc_counter(int counter, bool ok, int a0);

FilterResult filters(const MsgMatrix& M, const AccMatrix& A, const FtParams& fp);
bool check_stb(const ClockMatrix& C, std::span<const int> p_acma, const FtParams& fp);
std::optional<Tick> check_weak(const ClockMatrix& C, const FtParams& fp);

}  // namespace ssbcs

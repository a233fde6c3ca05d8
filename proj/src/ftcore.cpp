#include "ssbcs/ftcore.hpp"

#include <bit>

namespace ssbcs {

FtParams FtParams::from(const SystemConfig& cfg) {
  FtParams fp;
  fp.n0 = cfg.params.n0;
  fp.n1 = cfg.params.n1;
  fp.f0 = cfg.params.f0;
  fp.f1 = cfg.params.f1;
  fp.a0 = cfg.params.a0;
  fp.tau_max = cfg.derived.tau_max;
  fp.T = cfg.derived.T;
  fp.eps1 = cfg.derived.eps1;
  fp.eps2 = cfg.derived.eps2;
  fp.acc_m_threshold = cfg.derived.acc_m_threshold;
  fp.acc_h_threshold = cfg.derived.acc_h_threshold;
  return fp;
}

std::vector<Tick> msr_reduce(std::span<const Tick> values, int f, Tick tau_max) {
  if (f < 0) throw UsageError("negative fault budget");
  if (values.size() <= 2 * static_cast<std::size_t>(f)) {
    throw FaultBudgetError("reduce needs more than 2f values (have " +
                           std::to_string(values.size()) + ", f=" + std::to_string(f) + ")");
  }
  auto sorted = circ_sort(values, tau_max);
  return {sorted.begin() + f, sorted.end() - f};
}

std::vector<Tick> msr_select(std::span<const Tick> sorted, int f) {
  if (sorted.empty()) throw FaultBudgetError("select of an empty sequence");
  if (f < 0) throw UsageError("negative fault budget");
  if (f == 0) return {sorted.begin(), sorted.end()};
  std::vector<Tick> out;
  for (std::size_t k = 0; k < sorted.size(); k += static_cast<std::size_t>(f)) out.push_back(sorted[k]);
  return out;
}

Tick circular_mean(std::span<const Tick> sorted, Tick tau_max) {
  if (sorted.empty()) throw UsageError("mean of an empty sequence");
  Ring r(tau_max);
  unsigned __int128 sum = 0;
  for (Tick v : sorted) sum += r.sub(v, sorted.front());
  const unsigned __int128 n = sorted.size();
  // ceil(sum/n - 1/2) == floor((2 sum + n - 1) / (2n))
  auto off = static_cast<Tick>((2 * sum + n - 1) / (2 * n));
  return r.add(sorted.front(), off % tau_max);
}

std::optional<Tick> row_median(const ClockMatrix& C, int p, Tick tau_max) {
  std::vector<Tick> vals;
  for (int i = 0; i < C.cols(); ++i) {
    if (C.at(p, i)) vals.push_back(*C.at(p, i));
  }
  if (vals.empty()) return std::nullopt;
  return ring_med(vals, tau_max);
}

std::vector<Entry> column_medians(const ClockMatrix& C, const FtParams& fp) {
  std::vector<Entry> out(static_cast<std::size_t>(C.cols()));
  std::vector<Tick> col;
  for (int i = 0; i < C.cols(); ++i) {
    col.clear();
    for (int p = 0; p < C.rows(); ++p) {
      if (C.at(p, i)) col.push_back(*C.at(p, i));
    }
    if (col.empty() || static_cast<int>(col.size()) < fp.n1 - fp.f1) continue;
    out[static_cast<std::size_t>(i)] = ring_med(col, fp.tau_max);
  }
  return out;
}

Tick fta_values(std::span<const Tick> medians, int f0, Tick tau_max) {
  auto reduced = msr_reduce(medians, f0, tau_max);
  auto selected = msr_select(reduced, f0);
  return circular_mean(selected, tau_max);
}

std::optional<Tick> try_fta(const ClockMatrix& C, const FtParams& fp) {
  std::vector<Tick> meds;
  for (const auto& m : column_medians(C, fp)) {
    if (m) meds.push_back(*m);
  }
  if (meds.empty() || static_cast<int>(meds.size()) < 2 * fp.f0 + 1) return std::nullopt;
  return fta_values(meds, fp.f0, fp.tau_max);
}

Tick fta(const ClockMatrix& C, const FtParams& fp) {
  auto v = try_fta(C, fp);
  if (!v) throw InsufficientData("fewer than 2*f0+1 columns with n1-f1 entries");
  return *v;
}

std::optional<Tick> rft(const ClockMatrix& C, Tick c_pre, const Rational& p0, Rng& rng,
                        const FtParams& fp, bool* took_fta) {
  if (fp.n1 != 3) throw ConfigError("RFT is only defined for n1 = 3");
  const bool first = rng.bernoulli(p0);
  if (took_fta) *took_fta = first;
  if (first) return try_fta(C, fp);
  std::vector<Tick> cand;
  for (int p = 0; p < C.rows(); ++p) {
    if (auto m = row_median(C, p, fp.tau_max)) cand.push_back(*m);
  }
  cand.push_back(c_pre);
  return cand[rng.below(cand.size())];
}

bool accuracy_check(Tick m_curr, Tick m_pre, Tick h_curr, Tick h_pre, const FtParams& fp) {
  Ring r(fp.tau_max);
  const Tick T = fp.T % fp.tau_max;
  return r.dist(m_curr, r.add(m_pre, T)) <= fp.acc_m_threshold &&
         r.dist(h_curr, r.add(h_pre, T)) <= fp.acc_h_threshold;
}

int update_acc_counter(int counter, bool ok, int a0) {
  if (counter < 0 || counter > a0) throw UsageError("accuracy counter outside [0, a0]");
  return ok ? std::min(counter + 1, a0) : 0;
}

FilterResult filters(const MsgMatrix& M, const AccMatrix& A, const FtParams& fp) {
  if (M.rows() != fp.n1 || M.cols() != fp.n0 || A.rows() != fp.n1 || A.cols() != fp.n0) {
    throw UsageError("filter matrices must be n1 x n0");
  }
  FilterResult res;
  res.majority_values.assign(static_cast<std::size_t>(fp.n1), std::nullopt);
  const int need = fp.n0 - fp.f0;
  for (int p = 0; p < fp.n1; ++p) {
    int maxed = 0;
    for (int i = 0; i < fp.n0; ++i) maxed += A.at(p, i) == fp.a0 ? 1 : 0;
    bool acc = maxed >= need;
    if (acc) res.p_acc.push_back(p);

    bool maj = false;
    if (auto mp = row_median(M, p, fp.tau_max)) {
      int hits = 0;
      for (int i = 0; i < fp.n0; ++i) hits += M.at(p, i) == *mp ? 1 : 0;
      if (hits >= need) {
        maj = true;
        res.p_maj.push_back(p);
        res.majority_values[static_cast<std::size_t>(p)] = *mp;
      }
    }
    if (acc && maj) res.p_acma.push_back(p);
  }
  return res;
}

namespace {

struct Window {
  int columns = 0;
  Tick min_off = 0;
  Tick max_off = 0;
};

// Columns whose entries in every row of `rows` lie in [anchor, anchor + width].
Window count_in_window(const ClockMatrix& C, unsigned rows, Tick anchor, Tick width, const Ring& r) {
  Window w;
  bool first = true;
  for (int i = 0; i < C.cols(); ++i) {
    bool ok = true;
    Tick lo = 0, hi = 0;
    bool any = false;
    for (int p = 0; p < C.rows() && ok; ++p) {
      if (!(rows >> p & 1u)) continue;
      const auto& e = C.at(p, i);
      if (!e) {
        ok = false;
        break;
      }
      Tick off = r.sub(*e, anchor);
      if (off > width) {
        ok = false;
        break;
      }
      lo = any ? std::min(lo, off) : off;
      hi = any ? std::max(hi, off) : off;
      any = true;
    }
    if (!ok || !any) continue;
    ++w.columns;
    w.min_off = first ? lo : std::min(w.min_off, lo);
    w.max_off = first ? hi : std::max(w.max_off, hi);
    first = false;
  }
  return w;
}

std::vector<Tick> anchors_of(const ClockMatrix& C, unsigned rows) {
  std::vector<Tick> v;
  for (int p = 0; p < C.rows(); ++p) {
    if (!(rows >> p & 1u)) continue;
    for (int i = 0; i < C.cols(); ++i) {
      if (C.at(p, i)) v.push_back(*C.at(p, i));
    }
  }
  return v;
}

// Row subsets of `allowed` with at least `min_rows` members, largest first.
std::vector<unsigned> row_subsets(unsigned allowed, int min_rows) {
  std::vector<unsigned> out;
  for (unsigned m = allowed;; m = (m - 1) & allowed) {
    if (m != 0 && std::popcount(m) >= min_rows) out.push_back(m);
    if (m == 0) break;
  }
  std::stable_sort(out.begin(), out.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) > std::popcount(b); });
  return out;
}

}  // namespace

bool check_stb(const ClockMatrix& C, std::span<const int> p_acma, const FtParams& fp) {
  unsigned allowed = 0;
  for (int p : p_acma) {
    if (p < 0 || p >= C.rows()) throw UsageError("plane index out of range");
    allowed |= 1u << p;
  }
  const int min_rows = std::max(1, fp.n1 - fp.f1);
  const int min_cols = std::max(1, fp.n0 - fp.f0);
  Ring r(fp.tau_max);
  for (unsigned rows : row_subsets(allowed, min_rows)) {
    for (Tick a : anchors_of(C, rows)) {
      if (count_in_window(C, rows, a, fp.eps1, r).columns >= min_cols) return true;
    }
  }
  return false;
}

std::optional<Tick> check_weak(const ClockMatrix& C, const FtParams& fp) {
  const unsigned all = C.rows() >= 32 ? ~0u : (1u << C.rows()) - 1;
  const int min_rows = std::max(1, fp.n1 - fp.f1);
  const int min_cols = std::max(1, fp.n0 - 2 * fp.f0);
  const Tick width = 2 * (fp.eps2 / 2);
  Ring r(fp.tau_max);
  auto entries = anchors_of(C, all);
  if (entries.empty()) return std::nullopt;
  const auto subsets = row_subsets(all, min_rows);
  for (Tick a : circ_sort(entries, fp.tau_max)) {
    for (unsigned rows : subsets) {
      Window w = count_in_window(C, rows, a, width, r);
      if (w.columns >= min_cols) {
        Tick mid = w.min_off + (w.max_off - w.min_off) / 2;
        return r.add(a, mid);
      }
    }
  }
  return std::nullopt;
}

}  // namespace ssbcs

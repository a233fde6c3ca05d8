#include "oracles.hpp"
#include "ssbcs/ftcore.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

using namespace ssbcs;

namespace {

FtParams small(Tick tau = 1000) {
  FtParams fp;
  fp.n0 = 4;
  fp.n1 = 3;
  fp.f0 = 1;
  fp.f1 = 1;
  fp.a0 = 3;
  fp.tau_max = tau;
  fp.T = 100;
  fp.eps1 = 20;
  fp.eps2 = 40;
  fp.acc_m_threshold = 20;
  fp.acc_h_threshold = 46;
  return fp;
}

ClockMatrix constant(int rows, int cols, Tick v) { return ClockMatrix(rows, cols, Entry(v)); }

// Every entry of column i is set to col[i].
ClockMatrix columns(const std::vector<Tick>& col, int rows = 3) {
  ClockMatrix C(rows, static_cast<int>(col.size()));
  for (int p = 0; p < rows; ++p)
    for (int i = 0; i < C.cols(); ++i) C.at(p, i) = col[static_cast<std::size_t>(i)];
  return C;
}

bool in_arc(Tick x, const std::vector<Tick>& vals, Tick tau) {
  auto s = oracle::circ_sort(vals, tau);
  return oracle::sub(x, s.front(), tau) <= oracle::sub(s.back(), s.front(), tau);
}

}  // namespace

TEST(Msr, ReduceExamples) {
  std::vector<Tick> a{10, 10, 10, 100}, b{5, 5, 5}, c{995, 3, 7, 999};
  EXPECT_EQ(msr_reduce(a, 1, 1000), (std::vector<Tick>{10, 10}));
  EXPECT_EQ(msr_reduce(b, 0, 1000), (std::vector<Tick>{5, 5, 5}));
  EXPECT_EQ(msr_reduce(c, 1, 1000), (std::vector<Tick>{999, 3}));
  std::vector<Tick> two{1, 2};
  EXPECT_THROW(msr_reduce(two, 1, 1000), FaultBudgetError);
}

TEST(Msr, SelectExamples) {
  std::vector<Tick> a{10, 10}, b{1, 2, 3, 4, 5}, c{7};
  EXPECT_EQ(msr_select(a, 1), (std::vector<Tick>{10, 10}));
  EXPECT_EQ(msr_select(b, 2), (std::vector<Tick>{1, 3, 5}));
  EXPECT_EQ(msr_select(c, 3), (std::vector<Tick>{7}));
  std::vector<Tick> none;
  EXPECT_THROW(msr_select(none, 1), FaultBudgetError);
}

TEST(Fta, Examples) {
  auto fp = small();
  EXPECT_EQ(fta(constant(3, 4, 321), fp), 321u);
  EXPECT_EQ(fta(columns({10, 10, 10, 100}), fp), 10u);
  EXPECT_EQ(fta(columns({995, 999, 3, 7}), fp), 1u);
  std::vector<Tick> meds{995, 999, 3, 7};
  EXPECT_EQ(fta_values(meds, 1, 1000), 1u);
}

TEST(Fta, SparseColumnsExcluded) {
  auto fp = small();
  auto C = columns({10, 10, 10, 100});
  // Column 3 keeps only one entry, so it drops out; three columns remain.
  C.at(0, 3) = std::nullopt;
  C.at(1, 3) = std::nullopt;
  auto meds = column_medians(C, fp);
  EXPECT_FALSE(meds[3].has_value());
  EXPECT_EQ(fta(C, fp), 10u);
  C.at(0, 2) = std::nullopt;
  C.at(1, 2) = std::nullopt;
  EXPECT_THROW(fta(C, fp), InsufficientData);
  EXPECT_FALSE(try_fta(C, fp).has_value());
}

TEST(Fta, MatchesLinearOracleOnShortArcs) {
  Rng rng(21);
  for (int trial = 0; trial < 20000; ++trial) {
    const Tick tau = 64 + rng.below(2000);
    const int f = 1 + static_cast<int>(rng.below(3));
    const int n = 3 * f + 1 + static_cast<int>(rng.below(4));
    const Tick base = rng.below(tau);
    std::vector<Tick> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = wrap_add(base, rng.below(tau / 4), tau);
    ASSERT_EQ(fta_values(v, f, tau), oracle::fta_linear(v, f, tau));
  }
}

TEST(Rft, DegenerateBranches) {
  auto fp = small();
  Rng rng(3);
  auto C = columns({10, 10, 10, 100});
  for (int k = 0; k < 100; ++k) {
    bool took = false;
    EXPECT_EQ(rft(C, 500, Rational(1), rng, fp, &took), Entry(10));
    EXPECT_TRUE(took);
  }
  auto K = constant(3, 4, 77);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(rft(K, 77, Rational(0), rng, fp), Entry(77));
  FtParams four = fp;
  four.n1 = 4;
  EXPECT_THROW(rft(constant(4, 4, 1), 1, Rational(1, 2), rng, four), ConfigError);
}

TEST(Rft, PickIsUniformOverRowMediansAndPrevious) {
  auto fp = small();
  ClockMatrix C(3, 4);
  const Tick rows[3] = {10, 20, 30};
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < 4; ++i) C.at(p, i) = rows[p];
  Rng rng(99);
  std::map<Tick, int> count;
  const int N = 100000;
  for (int k = 0; k < N; ++k) ++count[*rft(C, 40, Rational(0), rng, fp)];
  const double sigma = std::sqrt(N * 0.25 * 0.75);
  ASSERT_EQ(count.size(), 4u);
  for (Tick v : {10u, 20u, 30u, 40u}) EXPECT_NEAR(count[v], N / 4.0, 3 * sigma) << v;
}

TEST(RftProperty, BranchFrequency) {
  auto fp = small();
  auto C = constant(3, 4, 5);
  Rng rng(1234);
  const int N = 1000000;
  int hits = 0;
  for (int k = 0; k < N; ++k) {
    bool took = false;
    rft(C, 5, Rational(4, 5), rng, fp, &took);
    hits += took ? 1 : 0;
  }
  EXPECT_NEAR(static_cast<double>(hits) / N, 0.8, 0.002);
}

TEST(Accuracy, ZeroDeviationAndBounds) {
  auto fp = small();
  fp.T = 1000;
  const Tick tau = fp.tau_max;
  EXPECT_TRUE(accuracy_check(wrap_add(100, 1000 % tau, tau), 100, wrap_add(7, 1000 % tau, tau), 7, fp));
  // m off by 2 eps0 + 1 where eps0 = 10
  EXPECT_FALSE(accuracy_check(wrap_add(100, 21, tau), 100, 7, 7, fp));
  EXPECT_TRUE(accuracy_check(wrap_add(100, 20, tau), 100, 7, 7, fp));
}

TEST(Accuracy, HardwareThresholdFromParameters) {
  // eps0 = 10, rho = 0.01, T = 1000, d_max_ticks = 5
  SystemParams p;
  p.rho = Rational(1, 100);
  p.T_H = 1000;
  p.d_max = 4950;
  p.eps0 = Rational(10);
  p.eps1 = 20;
  p.eps2 = 40;
  p.T0 = 960;
  p.eps_rnd = 0;
  auto cfg = SystemConfig::make(p);
  ASSERT_EQ(cfg.derived.d_max_ticks, 5);
  ASSERT_EQ(cfg.derived.T, 1000u);
  // (2*10 + 2*0.01*1000 + 5) / 0.99^2 = 45 / 0.9801 -> 46
  const Rational bound = Rational(45) / (Rational(99, 100) * Rational(99, 100));
  EXPECT_EQ(cfg.derived.acc_h_threshold, static_cast<Tick>(ceil_to_int(bound)));
  EXPECT_EQ(cfg.derived.acc_h_threshold, 46u);
  auto fp = FtParams::from(cfg);
  const Tick tau = fp.tau_max;
  const Tick m1 = wrap_add(500, 1000, tau);
  EXPECT_TRUE(accuracy_check(m1, 500, wrap_add(3, 1046, tau), 3, fp));
  EXPECT_FALSE(accuracy_check(m1, 500, wrap_add(3, 1047, tau), 3, fp));
}

TEST(Accuracy, Counter) {
  EXPECT_EQ(update_acc_counter(2, true, 3), 3);
  EXPECT_EQ(update_acc_counter(3, true, 3), 3);
  EXPECT_EQ(update_acc_counter(3, false, 3), 0);
  EXPECT_THROW(update_acc_counter(4, true, 3), UsageError);
}

TEST(Filters, Examples) {
  auto fp = small();
  MsgMatrix M(3, 4, Entry(1));
  AccMatrix A(3, 4, 0);
  const int acc_row[4] = {3, 3, 3, 0};
  for (int i = 0; i < 4; ++i) A.at(0, i) = acc_row[i];
  const Tick maj_row[4] = {50, 50, 50, 51};
  const Tick split_row[4] = {50, 50, 51, 51};
  for (int i = 0; i < 4; ++i) {
    M.at(0, i) = maj_row[i];
    M.at(1, i) = split_row[i];
  }
  auto r = filters(M, A, fp);
  EXPECT_EQ(r.p_acc, (std::vector<int>{0}));
  EXPECT_EQ(r.p_maj, (std::vector<int>{0, 2}));
  EXPECT_EQ(r.majority_values[0], Entry(50));
  EXPECT_FALSE(r.majority_values[1].has_value());
  EXPECT_EQ(r.p_acma, (std::vector<int>{0}));
  EXPECT_THROW(filters(MsgMatrix(2, 4), A, fp), UsageError);
}

TEST(Filters, AcmaIsIntersection) {
  auto fp = small();
  Rng rng(5);
  for (int trial = 0; trial < 5000; ++trial) {
    MsgMatrix M(3, 4);
    AccMatrix A(3, 4, 0);
    for (int p = 0; p < 3; ++p)
      for (int i = 0; i < 4; ++i) {
        if (rng.below(5)) M.at(p, i) = 100 + rng.below(3);
        A.at(p, i) = static_cast<int>(rng.below(4));
      }
    auto r = filters(M, A, fp);
    std::vector<int> both;
    std::set_intersection(r.p_acc.begin(), r.p_acc.end(), r.p_maj.begin(), r.p_maj.end(),
                          std::back_inserter(both));
    ASSERT_EQ(both, r.p_acma);
  }
}

TEST(CheckStb, Examples) {
  auto fp = small();
  auto K = constant(3, 4, 400);
  std::vector<int> all{0, 1, 2};
  EXPECT_TRUE(check_stb(K, all, fp));

  ClockMatrix C(3, 4);
  const Tick r0[4] = {95, 100, 105, 700};
  const Tick r1[4] = {100, 105, 95, 300};
  for (int i = 0; i < 4; ++i) {
    C.at(0, i) = r0[i];
    C.at(1, i) = r1[i];
    C.at(2, i) = 600 + 37 * i;
  }
  std::vector<int> first_two{0, 1};
  EXPECT_TRUE(check_stb(C, first_two, fp));

  ClockMatrix D(3, 4);
  for (int i = 0; i < 4; ++i) {
    D.at(0, i) = 100;
    D.at(1, i) = 150;
    D.at(2, i) = 800;
  }
  EXPECT_FALSE(check_stb(D, first_two, fp));
  EXPECT_FALSE(check_stb(D, all, fp));
}

TEST(CheckWeak, Examples) {
  auto fp = small();
  EXPECT_EQ(check_weak(constant(3, 4, 612), fp), Entry(612));

  ClockMatrix C(3, 4);
  C.at(0, 0) = 100;
  C.at(0, 1) = 100;
  C.at(1, 0) = 100;
  C.at(1, 1) = 100;
  C.at(0, 2) = 300;
  C.at(0, 3) = 500;
  C.at(1, 2) = 700;
  C.at(1, 3) = 900;
  const Tick r2[4] = {250, 450, 650, 850};
  for (int i = 0; i < 4; ++i) C.at(2, i) = r2[i];
  EXPECT_EQ(check_weak(C, fp), Entry(100));

  ClockMatrix D(3, 4);
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < 4; ++i) D.at(p, i) = static_cast<Tick>(80 * (4 * p + i));
  EXPECT_FALSE(check_weak(D, fp).has_value());
}

namespace {

ClockMatrix random_matrix(Rng& rng, int cols, Tick tau, Tick spread) {
  ClockMatrix C(3, cols);
  const Tick base = rng.below(tau);
  for (int p = 0; p < 3; ++p)
    for (int i = 0; i < cols; ++i) {
      if (rng.below(8) == 0) continue;
      C.at(p, i) = rng.below(4) == 0 ? rng.below(tau) : wrap_add(base, rng.below(spread + 1), tau);
    }
  return C;
}

unsigned mask_of(const std::vector<int>& rows) {
  unsigned m = 0;
  for (int p : rows) m |= 1u << p;
  return m;
}

}  // namespace

TEST(CheckStbProperty, AgreesWithBruteForce) {
  Rng rng(31);
  for (int trial = 0; trial < 3000; ++trial) {
    const int cols = rng.below(2) ? 4 : 7;
    FtParams fp = small(128);
    fp.n0 = cols;
    fp.f0 = cols == 4 ? 1 : 2;
    fp.eps1 = 1 + rng.below(40);
    auto C = random_matrix(rng, cols, 128, 50);
    std::vector<int> acma;
    for (int p = 0; p < 3; ++p)
      if (rng.below(4)) acma.push_back(p);
    const bool want = oracle::exists_block(C, mask_of(acma), 2, fp.n0 - fp.f0, fp.eps1, 128);
    ASSERT_EQ(check_stb(C, acma, fp), want) << trial;
  }
}

TEST(CheckStbProperty, MonotoneInEps1AndRows) {
  Rng rng(32);
  for (int trial = 0; trial < 3000; ++trial) {
    FtParams fp = small(128);
    fp.eps1 = 1 + rng.below(30);
    auto C = random_matrix(rng, 4, 128, 40);
    std::vector<int> some{static_cast<int>(rng.below(3)), static_cast<int>(rng.below(3))};
    std::sort(some.begin(), some.end());
    some.erase(std::unique(some.begin(), some.end()), some.end());
    std::vector<int> all{0, 1, 2};
    const bool base = check_stb(C, some, fp);
    if (!base) continue;
    ASSERT_TRUE(check_stb(C, all, fp));
    FtParams wider = fp;
    wider.eps1 += 1 + rng.below(10);
    ASSERT_TRUE(check_stb(C, some, wider));
  }
}

TEST(CheckWeakProperty, ImpliedByStb) {
  Rng rng(33);
  for (int trial = 0; trial < 3000; ++trial) {
    FtParams fp = small(128);
    fp.eps1 = 1 + rng.below(20);
    fp.eps2 = 2 * fp.eps1 + rng.below(3);
    auto C = random_matrix(rng, 4, 128, 30);
    std::vector<int> all{0, 1, 2};
    if (check_stb(C, all, fp)) ASSERT_TRUE(check_weak(C, fp).has_value()) << trial;
  }
}

TEST(CheckWeakProperty, AgreesWithBruteForce) {
  Rng rng(34);
  for (int trial = 0; trial < 3000; ++trial) {
    const int cols = rng.below(2) ? 4 : 7;
    FtParams fp = small(128);
    fp.n0 = cols;
    fp.f0 = cols == 4 ? 1 : 2;
    fp.eps2 = 2 + rng.below(39);
    auto C = random_matrix(rng, cols, 128, 50);
    const int min_cols = std::max(1, fp.n0 - 2 * fp.f0);
    const Tick half = fp.eps2 / 2;
    const bool want = oracle::exists_block(C, 7u, 2, min_cols, 2 * half, 128);
    auto got = check_weak(C, fp);
    ASSERT_EQ(got.has_value(), want) << trial;
    if (got) ASSERT_TRUE(oracle::valid_center(C, *got, 2, min_cols, half, 128)) << trial;
  }
}

TEST(FtaProperty, ValidityWithMarkedFaults) {
  Rng rng(35);
  for (int trial = 0; trial < 20000; ++trial) {
    const int n0 = 4 + static_cast<int>(rng.below(4));
    FtParams fp = small(1000);
    fp.n0 = n0;
    fp.f0 = (n0 - 1) / 3;
    const int bad_row = static_cast<int>(rng.below(4));  // 3 means none
    std::vector<bool> bad_col(static_cast<std::size_t>(n0), false);
    for (int k = 0; k < fp.f0; ++k) bad_col[rng.below(static_cast<std::uint64_t>(n0))] = true;
    const Tick base = rng.below(1000);
    ClockMatrix C(3, n0);
    for (int p = 0; p < 3; ++p)
      for (int i = 0; i < n0; ++i) {
        const bool adv = p == bad_row || bad_col[static_cast<std::size_t>(i)];
        C.at(p, i) = adv ? rng.below(1000) : wrap_add(base, rng.below(200), 1000);
      }
    const auto meds = column_medians(C, fp);
    std::vector<Tick> honest;
    for (int i = 0; i < n0; ++i)
      if (!bad_col[static_cast<std::size_t>(i)]) honest.push_back(*meds[static_cast<std::size_t>(i)]);
    ASSERT_TRUE(in_arc(fta(C, fp), honest, 1000)) << trial;
  }
}

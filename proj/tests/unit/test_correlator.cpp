#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "beatsim/correlator.hpp"

namespace beatsim {
namespace {

const double s2 = std::sqrt(0.5);

ModelParams figure1() { return ModelParams::from_beat(8.0, 0.05, 1.0); }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

TEST(Projection, DetectionsFromDoublyExcited) {
  const SystemState ee = SystemState::product(1, 0, 0, 0);
  EXPECT_LT((project_after_detection(ee, Channel::L2).amplitudes - Vector4c(0, 1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((project_after_detection(ee, Channel::L1).amplitudes - Vector4c(0, 0, 1, 0)).norm(), 1e-15);
  EXPECT_LT((project_after_detection(ee, Channel::N).amplitudes - Vector4c(0, s2, s2, 0)).norm(), 1e-15);
  EXPECT_LT((post_detection_state(Channel::N).amplitudes - Vector4c(0, s2, s2, 0)).norm(), 1e-15);
}

TEST(Projection, LastExcitationLeavesGround) {
  const SystemState late = SystemState::product(0, cplx(0.01, 0.02), 0, 0.3);
  const SystemState after = project_after_detection(late, Channel::L1);
  EXPECT_NEAR(std::abs(after.amplitudes(index::gg)), 1.0, 1e-15);
  EXPECT_NEAR(after.norm(), 1.0, 1e-15);
}

TEST(Projection, ZeroProbabilityDetectionRejected) {
  EXPECT_THROW(project_after_detection(SystemState::product(0, 1, 0, 0), Channel::L2), std::domain_error);
  EXPECT_THROW(project_after_detection(SystemState::product(0, 0, 0, 1), Channel::N), std::domain_error);
  EXPECT_THROW(project_after_detection(SystemState::eigen(0, 0, 1, 0), Channel::N), std::domain_error);
}

TEST(Projection, AcceptsEigenBasisInput) {
  const SystemState s = project_after_detection(SystemState::eigen(1, 0, 0, 0), Channel::L2);
  EXPECT_LT((s.amplitudes - Vector4c(0, 1, 0, 0)).norm(), 1e-15);
}

TEST(AnalyticTable, RowsFollowClosedForms) {
  const ModelParams p = ModelParams::from_beat(8.0, 0.3, 1.0, 100.0, 2.0);
  const auto grid = uniform_grid(5.0, 201);
  const CorrelationTable table = build_table(p, grid, Engine::Analytic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    EXPECT_EQ(table.at(Channel::L2, Channel::L1).values[i], analytic::p_L2_L1(p, t));
    EXPECT_NEAR(table.at(Channel::L2, Channel::N).values[i], 1.0 / 4.0 * std::exp(-1.3 * t), 1e-16);
    EXPECT_NEAR(table.at(Channel::N, Channel::N).values[i], 1.0 / 2.0 * std::exp(-1.3 * t), 1e-16);
  }
  for (Channel a : all_channels) {
    for (Channel b : all_channels) {
      const auto& s = table.at(a, b);
      EXPECT_EQ(s.engine, Engine::Analytic);
      EXPECT_EQ(s.first, a);
      EXPECT_EQ(s.second, b);
      for (double v : s.values) EXPECT_GE(v, 0.0);
    }
  }
}

TEST(AnalyticTable, ExchangeSymmetryAndAntibunching) {
  const auto grid = uniform_grid(6.0, 301);
  const CorrelationTable table = build_table(figure1(), grid, Engine::Analytic);
  for (Channel a : all_channels) {
    for (Channel b : all_channels) {
      EXPECT_LE(max_abs_diff(table.at(a, b).values, table.at(relabel(a), relabel(b)).values), 1e-12);
    }
  }
  EXPECT_EQ(table.at(Channel::L2, Channel::L2).values[0], 0.0);
  EXPECT_EQ(table.at(Channel::L1, Channel::L1).values[0], 0.0);
}

TEST(AnalyticTable, LocalSumHasNoBeat) {
  const auto grid = uniform_grid(6.0, 301);
  const CorrelationTable slow = build_table(ModelParams::from_beat(2.0, 0.2, 1.0), grid, Engine::Analytic);
  const CorrelationTable fast = build_table(ModelParams::from_beat(13.0, 0.2, 1.0), grid, Engine::Analytic);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = slow.at(Channel::L2, Channel::L1).values[i] + slow.at(Channel::L2, Channel::L2).values[i];
    const double b = fast.at(Channel::L2, Channel::L1).values[i] + fast.at(Channel::L2, Channel::L2).values[i];
    EXPECT_NEAR(a, b, 1e-15);
  }
}

TEST(BuildTable, McNeedsBudgetAndUniformGrid) {
  const auto grid = uniform_grid(3.0, 31);
  EXPECT_THROW(build_table(figure1(), grid, Engine::Mc), std::invalid_argument);
  TableOptions o;
  o.n_traj = 2000;
  EXPECT_THROW(build_table(figure1(), std::vector<double>{0.0, 0.1, 0.3}, Engine::Mc, o), std::invalid_argument);
  EXPECT_THROW(build_table(figure1(), std::vector<double>{0.2, 0.1}, Engine::Analytic), std::invalid_argument);
}

TEST(BuildTable, CenteredBinEdges) {
  const auto e = centered_bin_edges(uniform_grid(1.0, 11));
  ASSERT_EQ(e.size(), 12u);
  EXPECT_EQ(e.front(), 0.0);
  EXPECT_NEAR(e[1], 0.05, 1e-15);
  EXPECT_NEAR(e.back(), 1.05, 1e-15);
  EXPECT_THROW(centered_bin_edges(std::vector<double>{0.0, 0.1, 0.5}), std::invalid_argument);
}

TEST(BuildTable, MonteCarloRowsAgreeWithClosedForms) {
  // Bins are centered on the grid, so compare bin averages of the closed
  // forms; 5 sigma per bin keeps this a smoke test, the strict check lives
  // in the acceptance binary.
  const ModelParams p = ModelParams::from_beat(8.0, 0.5, 1.0);
  const auto grid = uniform_grid(3.0, 31);
  TableOptions o;
  o.n_traj = 20000;
  o.master_seed = 8;
  for (bool cascade : {true, false}) {
    o.mc_cascade = cascade;
    const CorrelationTable table = build_table(p, grid, Engine::Mc, o);
    const auto edges = centered_bin_edges(grid);
    const CorrelationTable ref = build_table(p, grid, Engine::Analytic);
    for (Channel first : all_channels) {
      for (Channel second : all_channels) {
        const auto& got = table.at(first, second).values;
        EXPECT_EQ(table.at(first, second).engine, Engine::Mc);
        for (std::size_t b = 1; b + 1 < grid.size(); ++b) {
          const double width = edges[b + 1] - edges[b];
          const double mean = ref.at(first, second).values[b];
          const double runs = cascade ? 0.25 * o.n_traj : static_cast<double>(o.n_traj);
          const double sigma = std::sqrt(std::max(mean * width * p.c, 1e-6) / runs) / (width * p.c);
          EXPECT_NEAR(got[b], mean, 5.0 * sigma + 0.02 * mean)
              << to_string(first) << "->" << to_string(second) << " bin " << b << " cascade " << cascade;
        }
      }
    }
  }
}

TEST(OdeTable, MatchesAnalyticAndVisibilityLaw) {
  const ModelParams p = figure1();
  const auto grid = uniform_grid(6.0, 601);
  TableOptions o;
  o.n_threads = 3;
  const CorrelationTable ode = build_table(p, grid, Engine::Ode, o);
  const CorrelationTable ref = build_table(p, grid, Engine::Analytic);
  for (Channel a : all_channels) {
    for (Channel b : all_channels) {
      EXPECT_EQ(ode.at(a, b).engine, Engine::Ode);
      EXPECT_LE(max_abs_diff(ode.at(a, b).values, ref.at(a, b).values), 1e-3)
          << to_string(a) << "->" << to_string(b);
      EXPECT_LE(max_abs_diff(ode.at(a, b).values, ode.at(relabel(a), relabel(b)).values), 1e-12);
    }
  }
  EXPECT_LE(ode.at(Channel::L2, Channel::L2).values[0], 1e-3);

  const auto& series = ode.at(Channel::L2, Channel::L1);
  const VisibilityExtraction v = extract_visibility(p, series.t_grid, series.values);
  ASSERT_GE(v.extremum_times.size(), 10u);
  for (std::size_t i = 0; i < v.extremum_times.size(); ++i) {
    if (std::isnan(v.extremum_visibility[i])) continue;
    EXPECT_NEAR(v.extremum_visibility[i], analytic::visibility(p, v.extremum_times[i]), 0.02);
  }
  const auto vs = visibility_series(ode, Channel::L2, Channel::L1);
  EXPECT_EQ(vs.size(), grid.size());
}

TEST(Visibility, AnalyticSeriesIsTheLaw) {
  const ModelParams p = figure1();
  const auto grid = uniform_grid(6.0, 61);
  const CorrelationTable table = build_table(p, grid, Engine::Analytic);
  const auto v = visibility_series(table, Channel::L2, Channel::L1);
  EXPECT_EQ(v[0], 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(v[i], analytic::visibility(p, grid[i]));
    EXPECT_NEAR(v[i], analytic::visibility_exponential_form(p, grid[i]), 1e-14);
  }
  EXPECT_THROW(visibility_series(table, Channel::L2, Channel::N), std::invalid_argument);
  EXPECT_THROW(visibility_series(table, Channel::N, Channel::L1), std::invalid_argument);
}

TEST(Visibility, ExtractionFromClosedFormSamples) {
  const ModelParams p = figure1();
  const auto grid = uniform_grid(6.0, 1201);
  std::vector<double> values;
  for (double t : grid) values.push_back(analytic::p_L2_L1(p, t));
  const VisibilityExtraction v = extract_visibility(p, grid, values);
  // delta_omega t_max / pi extrema of each kind combined, give or take the ends.
  EXPECT_GE(v.extremum_times.size(), 14u);
  for (std::size_t i = 0; i < v.extremum_times.size(); ++i) {
    if (i > 0) {
      EXPECT_NE(v.extremum_is_max[i], v.extremum_is_max[i - 1]);
    }
    // Linear envelopes between extrema cost up to ~7e-3 where the decay is fastest.
    if (!std::isnan(v.extremum_visibility[i])) {
      EXPECT_NEAR(v.extremum_visibility[i], analytic::visibility(p, v.extremum_times[i]), 1e-2);
    }
  }
}

TEST(Visibility, ExtractionErrors) {
  const ModelParams p = figure1();
  const auto short_grid = uniform_grid(0.5, 51);
  std::vector<double> values;
  for (double t : short_grid) values.push_back(analytic::p_L2_L1(p, t));
  EXPECT_THROW(extract_visibility(p, short_grid, values), std::domain_error);
  values.pop_back();
  EXPECT_THROW(extract_visibility(p, short_grid, values), std::invalid_argument);
  const ModelParams dark = ModelParams::from_beat(8.0, 0.0, 1.0);
  const std::vector<double> zeros(short_grid.size(), 0.0);
  EXPECT_THROW(extract_visibility(dark, short_grid, zeros), std::domain_error);
}

TEST(Ledger, Endpoints) {
  const ModelParams p = figure1();
  const NormalizationLedger start = normalization_ledger(p, 0.0);
  EXPECT_EQ(start.system, 1.0);
  EXPECT_EQ(start.radiated.L1 + start.radiated.L2 + start.radiated.N, 0.0);
  EXPECT_EQ(start.total, 1.0);
  const NormalizationLedger late = normalization_ledger(p, 2000.0);
  EXPECT_LT(late.system, 1e-40);
  EXPECT_NEAR(late.total, 1.0, 1e-12);
  EXPECT_THROW(normalization_ledger(p, -1.0), std::invalid_argument);
}

TEST(Ledger, SystemLossIsTheRadiatedFlux) {
  const ModelParams p = ModelParams::from_beat(8.0, 0.4, 1.3, 100.0, 1.7);
  const double h = 1e-5;
  for (double t : {0.1, 0.7, 2.5}) {
    const double d_system = (normalization_ledger(p, t + h).system - normalization_ledger(p, t - h).system) / (2 * h);
    const double flux = p.c * (analytic::p_L2_L1(p, t) + analytic::p_L2_L2(p, t) + analytic::p_L2_N(p, t));
    EXPECT_NEAR(d_system, -flux, 1e-4 * flux);
  }
}

TEST(Ledger, OdeAgreesWithClosedForm) {
  const ModelParams p = ModelParams::from_beat(8.0, 1.0, 1.0);
  const NormalizationLedger exact = normalization_ledger(p, 1.0);
  const NormalizationLedger ode = normalization_ledger_ode(p, 1.0);
  EXPECT_NEAR(ode.system, exact.system, 1e-3);
  EXPECT_NEAR(ode.radiated.L1, exact.radiated.L1, 1e-3);
  EXPECT_NEAR(ode.radiated.L2, exact.radiated.L2, 1e-3);
  EXPECT_NEAR(ode.radiated.N, exact.radiated.N, 1e-3);
  EXPECT_NEAR(ode.total, 1.0, 1e-6);
}

}  // namespace
}  // namespace beatsim

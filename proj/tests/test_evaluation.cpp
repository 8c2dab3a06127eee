#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "distvrft/errors.hpp"
#include "distvrft/evaluation.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/standard_networks.hpp"
#include "generators.hpp"

using namespace distvrft;

namespace {

DistributedController zero_controller(std::size_t n) {
    DistributedController c;
    c.nodes.resize(n);
    return c;
}

ExperimentConfig small_config(double sigma_v, std::size_t runs, std::vector<ControllerClass> classes) {
    ExperimentConfig cfg;
    cfg.sigma_v = sigma_v;
    cfg.runs = runs;
    cfg.classes = std::move(classes);
    cfg.grid_size = 128;
    cfg.threads = 2;
    return cfg;
}

}  // namespace

TEST(ClosedLoop, IdealControllerGivesReferenceTransfer) {
    for (const auto& spec : {two_node_network(), two_node_coupled_network(), nine_node_network()}) {
        const auto cls = assemble_closed_loop(spec, build_ideal_controller(spec));
        const auto n = static_cast<Eigen::Index>(spec.size());
        for (int k = 0; k < 16; ++k) {
            const double w = std::numbers::pi * (k + 0.5) / 16.0;
            const auto h = closed_loop_transfer(cls, w);
            ASSERT_TRUE(h.has_value());
            EXPECT_LT((h->topLeftCorner(n, n) - reference_transfer_eval(spec, w)).norm(), 1e-8);
        }
    }
}

TEST(ClosedLoop, ActiveLinks) {
    const auto spec = nine_node_network();
    EXPECT_EQ(assemble_closed_loop(spec, build_ideal_controller(spec)).active_links, 24U);
    EXPECT_EQ(assemble_closed_loop(spec, zero_controller(9)).active_links, 0U);
    EXPECT_EQ(assemble_closed_loop(two_node_coupled_network(), build_ideal_controller(two_node_coupled_network()))
                  .active_links,
              4U);
}

TEST(ClosedLoop, ZeroControllerIsOpenLoop) {
    const auto spec = nine_node_network();
    const auto cls = assemble_closed_loop(spec, zero_controller(9));
    gen::Rng rng(91);
    const auto resp = simulate_closed_loop(cls, gen::white_channels(rng, 9, 50));
    for (std::size_t i = 0; i < 9; ++i) {
        EXPECT_EQ(resp.y[i].max_abs(), 0.0);
        EXPECT_EQ(resp.u[i].max_abs(), 0.0);
    }
    // Measurement noise only reaches the plant through the controller.
    const auto v = gen::white_channels(rng, 9, 50, 0.1);
    const auto noisy = simulate_closed_loop(cls, MultiSignal(9, Signal::zeros(50)), v);
    for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(noisy.y[i].max_abs(), 0.0);
}

TEST(ClosedLoop, MeasurementNoiseActsLikeNegativeReference) {
    gen::Rng rng(96);
    const auto spec = two_node_coupled_network();
    const auto cls = assemble_closed_loop(spec, build_ideal_controller(spec));
    const auto v = gen::white_channels(rng, 2, 60, 0.1);
    auto minus_v = v;
    for (auto& s : minus_v) s *= -1.0;
    const auto a = simulate_closed_loop(cls, MultiSignal(2, Signal::zeros(60)), v);
    const auto b = simulate_closed_loop(cls, minus_v);
    EXPECT_LT(max_abs_difference(a.y, b.y), 1e-12);
    EXPECT_LT(max_abs_difference(a.u, b.u), 1e-12);
    EXPECT_GT(a.u[0].max_abs(), 0.0);
}

TEST(ClosedLoop, ZeroReferenceGivesZero) {
    const auto spec = two_node_coupled_network();
    const auto resp =
        simulate_closed_loop(assemble_closed_loop(spec, build_ideal_controller(spec)), MultiSignal(2, Signal::zeros(40)));
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(resp.y[i].max_abs(), 0.0);
        EXPECT_EQ(resp.u[i].max_abs(), 0.0);
    }
    EXPECT_FALSE(resp.diverged);
}

TEST(ClosedLoop, IdealTrackingAndJmr) {
    gen::Rng rng(92);
    const auto spec = nine_node_network();
    const auto cls = assemble_closed_loop(spec, build_ideal_controller(spec));
    const auto r = gen::white_channels(rng, 9, 200);
    const auto resp = simulate_closed_loop(cls, r);
    const auto yd = simulate_reference(spec, r);
    EXPECT_LE(max_abs_difference(resp.y, yd), 1e-8);
    EXPECT_LE(estimate_jmr(resp.y, yd), 1e-12);
}

TEST(ClosedLoop, DivergenceFlag) {
    NetworkSpec spec;
    spec.graph = Graph(1, {});
    spec.subsystems = {{gen::first_order(1.0, 0.5), {}, {}}};
    spec.reference = {{gen::first_order_reference(0.6), {}, {}}};
    auto ctrl = zero_controller(1);
    ctrl.nodes[0].diagonal = -3.0;  // closed-loop pole at 3.5
    const auto resp = simulate_closed_loop(assemble_closed_loop(spec, ctrl), {Signal::constant(100, 1.0)});
    EXPECT_TRUE(resp.diverged);
}

TEST(ClosedLoop, SinusoidalSteadyState) {
    const auto spec = nine_node_network();
    const auto data = generate_data(spec, 100, 1.0, 0.1, 93);
    const auto syn = synthesize_controllers(spec, data.u, data.y, {ControllerClass::full()}, 1);
    for (const auto& ctrl : {build_ideal_controller(spec), syn[0].controller}) {
        const auto cls = assemble_closed_loop(spec, ctrl);
        const double w = 0.45;
        const auto h = FrequencyEvaluator(cls.system)(w);
        ASSERT_TRUE(h.has_value());
        const auto hy = closed_loop_transfer(cls, w);
        ASSERT_TRUE(hy.has_value());
        EXPECT_LT((hy->topLeftCorner(9, 9) - h->topLeftCorner(9, 9)).norm(), 1e-12);
        for (std::size_t j : {0UL, 4UL}) {
            MultiSignal r(9, Signal::zeros(600));
            r[j] = gen::sinusoid(600, w);
            const auto resp = simulate_closed_loop(cls, r);
            for (std::size_t i = 0; i < 9; ++i) {
                for (std::size_t t = 580; t < 600; ++t) {
                    const auto hij = (*h)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                    const auto huj = (*h)(static_cast<Eigen::Index>(9 + i), static_cast<Eigen::Index>(j));
                    const auto z = std::polar(1.0, w * static_cast<double>(t));
                    EXPECT_NEAR(resp.y[i][t], std::real(hij * z), 1e-6);
                    EXPECT_NEAR(resp.u[i][t], std::real(huj * z), 1e-6);
                }
            }
        }
    }
}

TEST(Jmr, Examples) {
    gen::Rng rng(94);
    const auto y = gen::white_channels(rng, 3, 40);
    EXPECT_EQ(estimate_jmr(y, y), 0.0);
    auto shifted = y;
    for (std::size_t t = 0; t < 40; ++t) shifted[1][t] += 1.0;
    EXPECT_NEAR(estimate_jmr(y, shifted), 1.0, 1e-12);
    EXPECT_THROW(estimate_jmr(y, truncate(y, 30)), DimensionError);
    EXPECT_THROW(estimate_jmr(y, MultiSignal(2, Signal::zeros(40))), DimensionError);
}

TEST(Metric, IdealControllerIsExact) {
    for (const auto& spec : {two_node_network(), two_node_coupled_network(), nine_node_network()}) {
        const auto m = performance_metric(spec, build_ideal_controller(spec), frequency_grid(512));
        EXPECT_LE(m.value, 1e-8);
        EXPECT_EQ(m.skipped, 0U);
    }
}

TEST(Metric, ZeroControllerEqualsReferenceNorm) {
    const auto spec = nine_node_network();
    const auto grid = frequency_grid(256);
    double expected = 0.0;
    for (double w : grid) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reference_transfer_eval(spec, w));
        expected = std::max(expected, svd.singularValues()[0]);
    }
    EXPECT_NEAR(performance_metric(spec, zero_controller(9), grid).value, expected, 1e-12);
    EXPECT_NEAR(expected, 1.0, 1e-3);  // |T| peaks at DC
}

TEST(Metric, NonNegativeAndMatchesSvd) {
    const auto spec = nine_node_network();
    const auto data = generate_data(spec, 100, 1.0, 0.1, 95);
    const auto syn = synthesize_controllers(spec, data.u, data.y, {ControllerClass::decentralized_class()}, 1);
    const auto cls = assemble_closed_loop(spec, syn[0].controller);
    const auto grid = frequency_grid(64);
    double expected = 0.0;
    for (double w : grid) {
        const auto h = closed_loop_transfer(cls, w);
        ASSERT_TRUE(h.has_value());
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h->topLeftCorner(9, 9) - reference_transfer_eval(spec, w));
        expected = std::max(expected, svd.singularValues()[0]);
    }
    const auto m = performance_metric(spec, cls, grid);
    EXPECT_GT(m.value, 0.0);
    EXPECT_NEAR(m.value, expected, 1e-9 * expected);
}

TEST(Quantile, Type7) {
    EXPECT_EQ(quantile({3.0, 1.0, 2.0}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.25), 1.75);
    EXPECT_DOUBLE_EQ(quantile({1.0, 2.0, 3.0, 4.0}, 0.5), 2.5);
    EXPECT_EQ(quantile({5.0}, 0.9), 5.0);
    EXPECT_EQ(quantile({1.0, 9.0}, 0.0), 1.0);
    EXPECT_EQ(quantile({1.0, 9.0}, 1.0), 9.0);
    EXPECT_THROW(quantile({}, 0.5), DimensionError);
}

TEST(Steps, AmplitudesInUnitInterval) {
    const auto a = step_amplitudes(9, 1);
    ASSERT_EQ(a.size(), 9U);
    for (double v : a) {
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(a, step_amplitudes(9, 1));
    EXPECT_NE(a, step_amplitudes(9, 2));
    const auto r = step_reference(a, 20);
    EXPECT_EQ(r[3][0], a[3]);
    EXPECT_EQ(r[3][19], a[3]);
}

TEST(MonteCarlo, NoiseFreeFullClassIsExact) {
    const auto spec = nine_node_network();
    const auto res = monte_carlo(spec, small_config(0.0, 4, {ControllerClass::full()}));
    ASSERT_EQ(res.records.size(), 4U);
    for (const auto& rec : res.records) {
        EXPECT_TRUE(rec.ok) << rec.error;
        EXPECT_LE(rec.metric, 1e-8);
        EXPECT_LE(rec.jmr, 1e-12);
    }
    EXPECT_EQ(res.records[2].seed, 3U);
}

TEST(MonteCarlo, Deterministic) {
    const auto spec = nine_node_network();
    auto cfg = small_config(0.1, 2, default_classes(spec.graph));
    const auto a = monte_carlo(spec, cfg);
    cfg.threads = 1;
    const auto b = monte_carlo(spec, cfg);
    ASSERT_EQ(a.records.size(), 6U);
    ASSERT_EQ(a.summaries.size(), 3U);
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        EXPECT_EQ(a.records[k].cls, b.records[k].cls);
        EXPECT_EQ(a.records[k].metric, b.records[k].metric);
        EXPECT_EQ(a.records[k].jmr, b.records[k].jmr);
    }
    for (std::size_t c = 0; c < 3; ++c) {
        EXPECT_EQ(a.summaries[c].median, b.summaries[c].median);
        EXPECT_EQ(a.summaries[c].samples, b.summaries[c].samples);
    }
    EXPECT_EQ(a.records[0].cls, "full");
    EXPECT_EQ(a.records[1].cls, "reduced");
    EXPECT_EQ(a.records[2].cls, "decentralized");
}

TEST(MonteCarlo, MedianGrowsWithNoise) {
    const auto spec = nine_node_network();
    double previous = -1.0;
    for (double sigma : {0.0, 0.05, 0.1}) {
        const auto res = monte_carlo(spec, small_config(sigma, 15, {ControllerClass::full()}));
        ASSERT_EQ(res.summaries.size(), 1U);
        EXPECT_EQ(res.summaries[0].failures, 0U);
        EXPECT_GE(res.summaries[0].median, previous);
        previous = res.summaries[0].median;
    }
    EXPECT_GT(previous, 1e-6);
}

TEST(MonteCarlo, ClassOrderingOnSmallSample) {
    const auto spec = nine_node_network();
    const auto res = monte_carlo(spec, small_config(0.1, 15, default_classes(spec.graph)));
    ASSERT_EQ(res.summaries.size(), 3U);
    EXPECT_LT(res.summaries[0].median, res.summaries[1].median);
    EXPECT_LT(res.summaries[1].median, res.summaries[2].median);
    for (const auto& s : res.summaries) {
        EXPECT_LE(s.min, s.q1);
        EXPECT_LE(s.q1, s.median);
        EXPECT_LE(s.median, s.q3);
        EXPECT_LE(s.q3, s.max);
        EXPECT_EQ(s.count, 15U);
    }
}

TEST(MonteCarlo, ConfigValidation) {
    ExperimentConfig cfg;
    cfg.samples = 9;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.runs = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.sigma_u = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.sigma_v = -0.1;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    EXPECT_NO_THROW(cfg.validate());
}

TEST(MonteCarlo, DefaultClasses) {
    const auto nine = default_classes(nine_node_network().graph);
    ASSERT_EQ(nine.size(), 3U);
    EXPECT_EQ(nine[1].removed_links.size(), 4U);
    EXPECT_TRUE(nine[2].decentralized);
    const auto two = default_classes(two_node_network().graph);
    EXPECT_EQ(two.size(), 3U);
}

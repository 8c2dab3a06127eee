#include <gtest/gtest.h>

#include <filesystem>

#include "distvrft/errors.hpp"
#include "distvrft/ideal_controller.hpp"
#include "distvrft/io.hpp"
#include "distvrft/monte_carlo.hpp"
#include "distvrft/standard_networks.hpp"
#include "distvrft/virtual_signals.hpp"
#include "generators.hpp"

using namespace distvrft;
namespace fs = std::filesystem;

namespace {

void expect_same_network(const NetworkSpec& a, const NetworkSpec& b) {
    ASSERT_EQ(a.size(), b.size());
    EXPECT_EQ(a.graph.edges(), b.graph.edges());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.subsystems[i].G, b.subsystems[i].G);
        EXPECT_EQ(a.subsystems[i].W, b.subsystems[i].W);
        EXPECT_EQ(a.subsystems[i].F, b.subsystems[i].F);
        EXPECT_EQ(a.reference[i].T, b.reference[i].T);
        EXPECT_EQ(a.reference[i].Q, b.reference[i].Q);
        EXPECT_EQ(a.reference[i].P, b.reference[i].P);
    }
}

fs::path config_dir() { return DISTVRFT_CONFIG_DIR; }

}  // namespace

TEST(NetworkJson, RoundTrip) {
    gen::Rng rng(101);
    auto spec = gen::three_node_coupled_spec(rng);
    spec.subsystems[0].F[1] = gen::first_order(0.3, 0.2);
    for (const auto& s : {spec, nine_node_network(), two_node_coupled_network()}) {
        const auto text = network_to_json(s);
        expect_same_network(parse_network(text), s);
        EXPECT_EQ(network_to_json(parse_network(text)), text);
    }
}

TEST(NetworkJson, BundledNetworksMatchBuilders) {
    expect_same_network(load_network(config_dir() / "example1.json"), two_node_network());
    expect_same_network(load_network(config_dir() / "two_node_coupled.json"), two_node_coupled_network());
    expect_same_network(load_network(config_dir() / "nine_node.json"), nine_node_network());
}

TEST(NetworkJson, ScalarShorthandAndDefaults) {
    const auto spec = parse_network(R"({
      "nodes": [
        {"id": 1, "G": {"num": [1.0], "den": [1.0, -0.5]}, "W": {"2": 0.1}, "T": 0.5},
        {"id": 2, "G": 2.0, "W": {"1": 0.2}, "T": {"num": [0.4], "den": [1.0, -0.6]}}
      ],
      "edges": [[1, 2]]
    })");
    EXPECT_EQ(spec.subsystems[0].W.at(1), RationalTF(0.1));
    EXPECT_EQ(spec.subsystems[1].G, RationalTF(2.0));
    EXPECT_EQ(spec.reference[0].T, RationalTF(0.5));
    EXPECT_TRUE(spec.reference[0].Q.empty());
}

TEST(NetworkJson, Errors) {
    EXPECT_THROW(parse_network("{"), SpecError);
    EXPECT_THROW(parse_network(R"({"edges": []})"), SpecError);
    EXPECT_THROW(parse_network(R"({"nodes": []})"), SpecError);
    EXPECT_THROW(parse_network(R"({"nodes": [{"id": 1, "G": 1.0}]})"), SpecError);
    EXPECT_THROW(parse_network(R"({"nodes": [{"id": 1, "G": {"num": [1], "den": []}, "T": 0.5}]})"), SpecError);
    EXPECT_THROW(parse_network(R"({"nodes": [{"id": 1, "G": 1, "T": 0.5}], "edges": [[1, 2]]})"), SpecError);
    EXPECT_THROW(parse_network(R"({"nodes": [{"id": 1, "G": 1, "T": 0.5}, {"id": 1, "G": 1, "T": 0.5}]})"), SpecError);
    // W on a non-neighbour
    EXPECT_THROW(parse_network(R"({"nodes": [{"id": 1, "G": 1, "T": 0.5, "W": {"2": 0.1}},
                                            {"id": 2, "G": 1, "T": 0.5}]})"),
                 SpecError);
    EXPECT_THROW(load_network("/nonexistent/network.json"), ConfigError);
}

TEST(ControllerJson, RoundTrip) {
    for (const auto& spec : {nine_node_network(), two_node_network()}) {
        const auto data = generate_data(spec, 100, 1.0, 0.1, 102);
        const auto results = synthesize_controllers(spec, data.u, data.y, default_classes(spec.graph), 1);
        const auto ideal = build_ideal_controller(spec);
        for (const auto& syn : results) {
            const auto text = controller_to_json(syn);
            const auto back = parse_controller(text, ideal);
            ASSERT_EQ(back.nodes.size(), syn.controller.nodes.size());
            for (std::size_t i = 0; i < back.nodes.size(); ++i) {
                EXPECT_EQ(back.nodes[i].diagonal, syn.controller.nodes[i].diagonal);
                for (std::size_t j : spec.graph.neighbors(i)) {
                    EXPECT_EQ(back.nodes[i].w(j), syn.controller.nodes[i].w(j));
                    EXPECT_EQ(back.nodes[i].q(j), syn.controller.nodes[i].q(j));
                }
                EXPECT_EQ(back.nodes[i].out_o, ideal.nodes[i].out_o);
            }
        }
    }
}

TEST(ControllerJson, Errors) {
    const auto ideal = build_ideal_controller(two_node_network());
    EXPECT_THROW(parse_controller("[]", ideal), SpecError);
    EXPECT_THROW(parse_controller(R"({"nodes": [{"id": 1, "C_ii": 1.0}]})", ideal), SpecError);
    EXPECT_THROW(parse_controller(R"({"nodes": [{"id": 1}, {"id": 2, "C_ii": 1.0}]})", ideal), SpecError);
}

TEST(DataCsv, RoundTripIsExact) {
    gen::Rng rng(103);
    const auto u = gen::white_channels(rng, 3, 50);
    const auto y = gen::white_channels(rng, 3, 50, 1e-7);
    const auto text = data_to_csv(u, y);
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,u_1,u_2,u_3,y_1,y_2,y_3");
    const auto back = parse_data_csv(text);
    EXPECT_EQ(max_abs_difference(back.u, u), 0.0);
    EXPECT_EQ(max_abs_difference(back.y, y), 0.0);
}

TEST(DataCsv, Errors) {
    EXPECT_THROW(parse_data_csv(""), SpecError);
    EXPECT_THROW(parse_data_csv("t,u_1,y_2\n0,1,2\n"), SpecError);
    EXPECT_THROW(parse_data_csv("t,u_1,y_1\n0,1\n"), SpecError);
    EXPECT_THROW(parse_data_csv("t,u_1,y_1\n0,1,abc\n"), SpecError);
    EXPECT_THROW(data_to_csv(MultiSignal(2, Signal::zeros(3)), MultiSignal(1, Signal::zeros(3))), DimensionError);
    EXPECT_THROW(load_data_csv("/nonexistent/data.csv"), ConfigError);
}

TEST(Csv, Headers) {
    const auto spec = two_node_coupled_network();
    gen::Rng rng(104);
    const auto vd = virtual_references_distributed(spec, simulate_plant(spec, gen::white_channels(rng, 2, 20)));
    const auto v = virtual_to_csv(vd);
    EXPECT_EQ(v.substr(0, v.find('\n')), "t,r_bar_1,r_bar_2,e_bar_1,e_bar_2,p_bar_1_2,p_bar_2_1,o_bar_c_1_2,o_bar_c_2_1");
    EXPECT_EQ(static_cast<std::size_t>(std::count(v.begin(), v.end(), '\n')), vd.horizon + 1);

    ReplicateRecord rec{7, "full", 0.25, 1e-3, true, ""};
    EXPECT_EQ(replicates_to_csv({rec}), "seed,class,metric,J_MR,ok\n7,full,0.25,0.001,1\n");
    ClassSummary s;
    s.cls = "full";
    s.count = 1;
    s.min = s.q1 = s.median = s.q3 = s.max = 0.5;
    s.median_jmr = 0.125;
    EXPECT_EQ(summary_to_csv({s}),
              "class,count,failures,min,q1,median,q3,max,median_J_MR\nfull,1,0,0.5,0.5,0.5,0.5,0.5,0.125\n");
}

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.15), "0.15");
    EXPECT_EQ(format_double(1.0), "1");
    EXPECT_EQ(format_double(-2.5e-12), "-2.5e-12");
    const double x = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Files, WriteCreatesDirectories) {
    const auto dir = fs::temp_directory_path() / "distvrft_io_test" / "nested";
    fs::remove_all(dir.parent_path());
    write_text_file(dir / "a.txt", "hello\n");
    EXPECT_EQ(read_text_file(dir / "a.txt"), "hello\n");
    fs::remove_all(dir.parent_path());
    EXPECT_THROW(read_text_file(dir / "a.txt"), ConfigError);
}

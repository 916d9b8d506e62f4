#include <doctest.h>

#include <string>

#include "nagi/config.hpp"

using namespace nagi;

TEST_CASE("an empty document resolves to the defaults") {
    const RunConfig cfg = parse_run_config("{}");
    CHECK(cfg.master_seed == 1);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.workers == 1);
    CHECK(cfg.engine.eval.sim.izhikevich.a == 0.02);
    CHECK(cfg.engine.eval.sim.izhikevich.c == -65.0);
    CHECK(cfg.engine.eval.sim.synapse.i_scale == 15.0);
    CHECK(cfg.engine.eval.sim.plasticity.w_cap == 5.0);
    CHECK(cfg.engine.eval.codec.p_max == 0.1);
    CHECK(cfg.engine.eval.codec.window_len == 20);
    CHECK(cfg.engine.eval.health.h0 == 100.0);
    CHECK(cfg.engine.eval.n_trials == 3);
    CHECK(cfg.engine.env.variant == EnvironmentVariant::Binary1D);
    CHECK(cfg.engine.env.dataset_size == 40);
    CHECK(cfg.engine.evolution.population_size == 100);
    CHECK(cfg.engine.evolution.compatibility_threshold == 3.0);
    CHECK(cfg.engine.evolution.amplitudes.lo == 0.001);
    CHECK(cfg.engine.evolution.amplitudes.hi == 0.1);
}

TEST_CASE("explicit values land in the right fields") {
    const RunConfig cfg = parse_run_config(R"({
        "master_seed": 99,
        "workers": 4,
        "environment": {"variant": "linear2d", "dataset_size": 60},
        "evolution": {"population_size": 30, "n_trials": 5},
        "plasticity": {"a_min": 0.005, "a_max": 0.05},
        "mutation": {"add_node": 0.2}
    })");
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.workers == 4);
    CHECK(cfg.engine.env.variant == EnvironmentVariant::Linear2D);
    CHECK(cfg.engine.env.dataset_size == 60);
    CHECK(cfg.engine.evolution.population_size == 30);
    CHECK(cfg.engine.eval.n_trials == 5);
    CHECK(cfg.engine.evolution.mutation.add_node == 0.2);
    // Genome amplitude bounds follow the plasticity block.
    CHECK(cfg.engine.evolution.amplitudes.lo == 0.005);
    CHECK(cfg.engine.evolution.amplitudes.hi == 0.05);
}

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_run_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("unknown keys are named by path") {
    CHECK(error_of(R"({"evolution": {"foo": 1}})").find("/evolution/foo") !=
          std::string::npos);
    CHECK(error_of(R"({"typo": 1})").find("/typo") != std::string::npos);
    CHECK(error_of(R"({"synapse": {"weight": 0.5}})").find("/synapse/weight") !=
          std::string::npos);
}

TEST_CASE("wrong types and non-finite numbers are rejected") {
    CHECK(error_of(R"({"workers": "many"})").find("wrong type") != std::string::npos);
    CHECK(error_of(R"({"codec": {"p_max": [1]}})").find("/codec/p_max") !=
          std::string::npos);
    // JSON cannot carry inf/nan literals; a huge exponent overflows instead.
    CHECK(error_of(R"({"health": {"h0": 1e999}})") != "");
}

TEST_CASE("semantic violations name the offending key") {
    CHECK(error_of(R"({"evolution": {"population_size": 1}})")
              .find("/evolution/population_size") != std::string::npos);
    CHECK(error_of(R"({"plasticity": {"sigma_minus": 5.0}})")
              .find("/plasticity/sigma_minus") != std::string::npos);
    CHECK(error_of(R"({"environment": {"dataset_size": 39}})")
              .find("/environment/dataset_size") != std::string::npos);
    CHECK(error_of(R"({"environment": {"action_count": 3}})")
              .find("/environment/action_count") != std::string::npos);
    CHECK(error_of(R"({"codec": {"p_max": 0.0}})").find("/codec/p_max") !=
          std::string::npos);
    CHECK(error_of(R"({"workers": 0})").find("/workers") != std::string::npos);
    CHECK(error_of(R"({"mutation": {"add_connection": 1.5}})")
              .find("/mutation/add_connection") != std::string::npos);
}

TEST_CASE("parse errors report the line") {
    const std::string text = "{\n  \"workers\": 1,\n  \"master_seed\": ]\n}";
    const std::string err = error_of(text);
    CHECK(err.find("line 3") != std::string::npos);
}

TEST_CASE("the resolved form is a fixed point") {
    const RunConfig defaults = parse_run_config("{}");
    const std::string resolved = resolved_config_json(defaults);
    const RunConfig back = parse_run_config(resolved);
    CHECK(resolved_config_json(back) == resolved);

    // A customized config also survives the round trip.
    const RunConfig custom = parse_run_config(R"({
        "master_seed": 123456789,
        "environment": {"variant": "linear2d", "eat_fraction_lo": 0.45},
        "evolution": {"survival_fraction": 0.25, "frozen_schedule": true}
    })");
    const std::string doc = resolved_config_json(custom);
    CHECK(resolved_config_json(parse_run_config(doc)) == doc);
    CHECK(doc.find("\"frozen_schedule\": true") != std::string::npos);
}

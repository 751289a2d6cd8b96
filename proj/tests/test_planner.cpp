#include <doctest.h>

#include <random>

#include "brainframe/planner.hpp"
#include "oracle.hpp"

using namespace brainframe;
using testing_support::oracle;

namespace {

ExperimentSpec spec(UseCase uc, std::uint64_t n, double density, double brain_seconds = 40.0) {
    return {uc, n, density, false, brain_seconds};
}

const FabricComparison& comparison(const PlanReport& r, Fabric f) {
    for (const auto& c : r.single_fabric)
        if (c.fabric == f) return c;
    throw std::runtime_error("fabric not compared");
}

bool compared(const PlanReport& r, Fabric f) {
    for (const auto& c : r.single_fabric)
        if (c.fabric == f) return true;
    return false;
}

} // namespace

TEST_SUITE("planner") {

TEST_CASE("brain time converts to 50 us steps") {
    CHECK(steps_for_brain_time(40.0) == oracle()["steps_40_brain_seconds"].get<std::int64_t>());
    CHECK(steps_for_brain_time(40.0) == 800000);
    CHECK(steps_for_brain_time(0.0) == 0);
    CHECK(steps_for_brain_time(6.0) == 120000);
    CHECK_THROWS_AS(steps_for_brain_time(-1.0), ConfigError);
}

TEST_CASE("two-experiment synthetic example") {
    const auto& ref = oracle()["planner_two_experiment"];
    // One step per experiment so the per-step times are the totals.
    const double brain = kRealTimeStepSeconds;
    Calibration cal;
    cal.add(Fabric::phi, UseCase::rgj, 1.0, 1000, 10.0);
    cal.add(Fabric::gpu, UseCase::rgj, 1.0, 1000, 15.0);
    cal.add(Fabric::phi, UseCase::rgj, 1.0, 2000, 20.0);
    cal.add(Fabric::gpu, UseCase::rgj, 1.0, 2000, 5.0);
    const auto r = plan({spec(UseCase::rgj, 1000, 1.0, brain), spec(UseCase::rgj, 2000, 1.0, brain)}, cal);
    CHECK(r.total_seconds == ref["best_total_s"].get<double>());
    CHECK(r.experiments[0].decision.fabric == Fabric::phi);
    CHECK(r.experiments[1].decision.fabric == Fabric::gpu);
    CHECK(comparison(r, Fabric::phi).time_saved_percent == doctest::Approx(ref["saved_vs_f1_percent"].get<double>()));
    CHECK(comparison(r, Fabric::gpu).time_saved_percent == doctest::Approx(ref["saved_vs_f2_percent"].get<double>()));
    CHECK(comparison(r, Fabric::phi).time_saved_percent == 50.0);
    CHECK(comparison(r, Fabric::gpu).time_saved_percent == 25.0);
    CHECK_FALSE(compared(r, Fabric::dfe));
}

TEST_CASE("a fabric that wins everything saves nothing against itself") {
    Calibration cal;
    for (std::uint64_t n : {96u, 960u}) {
        cal.add(Fabric::dfe, UseCase::sgj, 0.5, n, 1e-5 * static_cast<double>(n));
        cal.add(Fabric::gpu, UseCase::sgj, 0.5, n, 2e-5 * static_cast<double>(n));
    }
    const auto r = plan({spec(UseCase::sgj, 96, 0.5), spec(UseCase::sgj, 500, 0.5)}, cal);
    CHECK(comparison(r, Fabric::dfe).time_saved_percent == 0.0);
    CHECK(comparison(r, Fabric::gpu).time_saved_percent > 0.0);
}

TEST_CASE("energy is board power times predicted time") {
    Calibration cal;
    cal.add(Fabric::dfe, UseCase::ngj, 0.0, 100, 60.0);
    cal.add(Fabric::gpu, UseCase::ngj, 0.0, 200, 60.0);
    const double one_step = kRealTimeStepSeconds;
    auto r = plan({spec(UseCase::ngj, 100, 0.0, one_step), spec(UseCase::ngj, 200, 0.0, one_step)}, cal);
    const auto joules = energy(r);
    CHECK(joules[0] == 8400.0);
    CHECK(joules[1] == 15000.0);
    CHECK(r.total_energy_joules == 23400.0);

    r = plan({spec(UseCase::ngj, 100, 0.0, 0.0)}, cal);
    CHECK(energy(r)[0] == 0.0);
    CHECK(r.total_energy_joules == 0.0);
}

TEST_CASE("energy savings can disagree with time savings") {
    // GPU is faster for the second experiment but draws more power.
    Calibration cal;
    for (std::uint64_t n : {96u, 960u}) {
        cal.add(Fabric::dfe, UseCase::sgj, 1.0, n, 1.0);
        cal.add(Fabric::gpu, UseCase::sgj, 1.0, n, n == 96 ? 2.0 : 0.9);
    }
    const double one_step = kRealTimeStepSeconds;
    const auto r = plan({spec(UseCase::sgj, 96, 1.0, one_step), spec(UseCase::sgj, 960, 1.0, one_step)}, cal);
    const auto& dfe = comparison(r, Fabric::dfe);
    CHECK(dfe.time_saved_seconds > 0.0);
    CHECK(dfe.energy_saved_joules < 0.0);
}

TEST_CASE("missing coverage is an error unless fallback is allowed") {
    Calibration cal;
    cal.add(Fabric::dfe, UseCase::rgj, 1.0, 96, 1e-5);
    cal.add(Fabric::dfe, UseCase::rgj, 1.0, 960, 1e-4);
    const std::vector<ExperimentSpec> batch{spec(UseCase::rgj, 480, 1.0), spec(UseCase::ngj, 2000, 0.0)};
    CHECK_THROWS_AS(plan(batch, cal), CoverageError);
    const auto r = plan(batch, cal, true);
    CHECK(r.uncovered == std::vector<std::size_t>{1});
    CHECK(r.experiments[1].decision.fabric == Fabric::dfe);
    CHECK_FALSE(r.experiments[1].seconds.has_value());
    CHECK(r.total_seconds == doctest::Approx(800000 * (1e-5 + (480.0 - 96) / 864 * 9e-5)));
    CHECK(compared(r, Fabric::dfe));
    CHECK_THROWS_AS(plan({}, cal), ConfigError);
    CHECK_THROWS_AS(plan({spec(UseCase::rgj, 10000, 1.0)}, cal), UnsupportedSizeError);
}

TEST_CASE("heterogeneous total never exceeds a single-fabric total") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> t(1e-6, 1e-3);
    const std::vector<std::uint64_t> grid{96, 480, 960, 3840, 7680};
    for (int trial = 0; trial < 50; ++trial) {
        Calibration cal;
        for (auto f : kAllFabrics)
            for (auto uc : {UseCase::rgj, UseCase::sgj, UseCase::ngj})
                for (double d : {0.0, 0.5, 1.0}) {
                    if (uc == UseCase::ngj && d > 0.0) continue;
                    for (auto n : grid) cal.add(f, uc, d, n, t(rng));
                }
        std::vector<ExperimentSpec> batch;
        std::uniform_int_distribution<std::uint64_t> size(96, 7680);
        for (int i = 0; i < 6; ++i) batch.push_back(spec(static_cast<UseCase>(i % 3), size(rng), (i % 2) * 0.5 + 0.5));
        const auto r = plan(batch, cal);
        REQUIRE(r.single_fabric.size() == 3);
        for (const auto& c : r.single_fabric) {
            CHECK(r.total_seconds <= c.total_seconds);
            CHECK(c.time_saved_percent >= 0.0);
        }
    }
}

TEST_CASE("savings percentages are scale invariant") {
    Calibration a, b;
    for (std::uint64_t n : {96u, 960u}) {
        a.add(Fabric::dfe, UseCase::rgj, 0.5, n, 1e-5 * static_cast<double>(n));
        a.add(Fabric::phi, UseCase::rgj, 0.5, n, 4e-3);
        b.add(Fabric::dfe, UseCase::rgj, 0.5, n, 8.0 * 1e-5 * static_cast<double>(n));
        b.add(Fabric::phi, UseCase::rgj, 0.5, n, 8.0 * 4e-3);
    }
    const std::vector<ExperimentSpec> batch{spec(UseCase::rgj, 100, 0.5), spec(UseCase::rgj, 900, 0.5)};
    const auto ra = plan(batch, a), rb = plan(batch, b);
    for (std::size_t i = 0; i < ra.single_fabric.size(); ++i)
        CHECK(ra.single_fabric[i].time_saved_percent == doctest::Approx(rb.single_fabric[i].time_saved_percent));
}

TEST_CASE("text table reports minutes") {
    Calibration cal;
    cal.add(Fabric::dfe, UseCase::ngj, 0.0, 96, 1e-4);
    cal.add(Fabric::dfe, UseCase::ngj, 0.0, 960, 1e-4);
    const auto r = plan({spec(UseCase::ngj, 100, 0.0, 60.0)}, cal);
    const auto text = format_plan_table(r);
    // 60 s of brain time = 1.2e6 steps * 1e-4 s = 120 s = 2 min
    CHECK(text.find("2.000") != std::string::npos);
    CHECK(text.find("DFE") != std::string::npos);
}

} // TEST_SUITE

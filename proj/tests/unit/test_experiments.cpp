#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <numbers>

#include "leakynet/experiments.hpp"
#include "leakynet/report.hpp"

using namespace leakynet;

namespace {

const double e = std::numbers::e;

EnsembleConfig small_ensemble(unsigned workers) {
    EnsembleConfig c;
    c.spec = ModelSpec{3, LeakKind::reset, e};
    c.init = InitSpec::parse("ladder");
    c.replicas = 500;
    c.seed = 17;
    c.workers = workers;
    return c;
}

}  // namespace

TEST(Init, Parse) {
    EXPECT_EQ(InitSpec::parse("ladder").kind, InitKind::ladder);
    EXPECT_EQ(InitSpec::parse("s0").kind, InitKind::s0_random);
    EXPECT_EQ(InitSpec::parse("s0_random").kind, InitKind::s0_random);
    const InitSpec x = InitSpec::parse("explicit:0,1,2,7");
    ASSERT_EQ(x.kind, InitKind::explicit_list);
    EXPECT_EQ(*x.list, (PotentialList{0, 1, 2, 7}));
    EXPECT_THROW(InitSpec::parse("explicit:1,2,3"), std::invalid_argument);
    EXPECT_THROW(InitSpec::parse("explicit:0,a"), std::invalid_argument);
    EXPECT_THROW(InitSpec::parse("random"), std::invalid_argument);
    RngStream r(1, 0);
    EXPECT_EQ(InitSpec::parse("ladder").draw(4, r), ladder(4));
}

TEST(Ensemble, DeterministicAcrossWorkerCounts) {
    const EnsembleReport a = extinction_ensemble(small_ensemble(1));
    const EnsembleReport b = extinction_ensemble(small_ensemble(4));
    EXPECT_EQ(a.records, b.records);
    EXPECT_EQ(a.aggregates, b.aggregates);
    EXPECT_EQ(ensemble_json(a, Provenance{}), ensemble_json(b, Provenance{}));
    EXPECT_EQ(ensemble_csv(a), ensemble_csv(b));
}

TEST(Ensemble, AggregatesArePureFunctionsOfRecords) {
    const EnsembleReport r = extinction_ensemble(small_ensemble(2));
    EXPECT_EQ(aggregate(r.records), r.aggregates);
    const std::string json = ensemble_json(r, Provenance{});
    EXPECT_EQ(records_from_json(json), r.records);
    EXPECT_TRUE(aggregates_reproducible(json));
    const auto stored = aggregates_from_json(json);
    EXPECT_EQ(stored.mean, r.aggregates.mean);

    // Tampering with one record breaks reproducibility.
    auto j = nlohmann::ordered_json::parse(json);
    j["records"][0]["tau"] = j["records"][0]["tau"].get<double>() + 1.0;
    EXPECT_FALSE(aggregates_reproducible(j.dump()));
}

TEST(Ensemble, AggregateValues) {
    std::vector<ReplicaRecord> recs;
    for (int i = 1; i <= 4; ++i) recs.push_back(ReplicaRecord{std::uint64_t(i - 1), double(i), 3, 2, 1, StopReason::absorbed});
    const EnsembleAggregates a = aggregate(recs);
    EXPECT_EQ(a.replicas, 4u);
    EXPECT_EQ(a.absorbed, 4u);
    EXPECT_EQ(*a.mean, 2.5);
    EXPECT_NEAR(*a.standard_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
    ASSERT_TRUE(a.ks.has_value());
}

TEST(Ensemble, CensoringFailsLoudlyUnlessAllowed) {
    EnsembleConfig c = small_ensemble(2);
    c.spec.n = 5;
    c.jump_budget = 10;
    EXPECT_THROW(extinction_ensemble(c), CensoredRunError);
    c.allow_censoring = true;
    const EnsembleReport r = extinction_ensemble(c);
    EXPECT_GT(r.aggregates.censored, 0u);
    EXPECT_EQ(r.aggregates.absorbed + r.aggregates.censored, r.aggregates.replicas);
}

TEST(Ensemble, LowerBoundFormula) {
    EXPECT_NEAR(c_lower_bound(6), (5.0 + std::exp(4.0)) / 125.0, 1e-15);
    EXPECT_NEAR(c_lower_bound(7), (6.0 + std::exp(5.0)) / 216.0, 1e-15);
}

TEST(Ensemble, MemorylessProxyOnExponentialSamples) {
    RngStream r(2, 0);
    std::vector<double> x(20000);
    for (auto& v : x) v = 3.0 * r.exponential();
    const double c = estimate_c(x, 1).value;
    for (auto [s, t] : {std::pair{0.5, 0.5}, std::pair{1.0, 1.0}}) {
        const MemorylessCheck m = memoryless_proxy(x, c, s, t);
        EXPECT_NEAR(m.joint, std::exp(-(s + t)), 0.02);
        EXPECT_LE(m.gap, 5.0 * m.combined_se);
        EXPECT_GT(m.combined_se, 0.0);
    }
}

TEST(Occupancy, ZeroSurvivorsIsAnError) {
    OccupancyConfig c;
    c.spec = ModelSpec{2, LeakKind::reset, e};
    c.init = InitSpec::parse("ladder");
    c.t = 200.0;
    c.replicas = 5;
    EXPECT_THROW(occupancy(c), std::domain_error);
}

TEST(Occupancy, TinyTimeFromWIsNearOne) {
    OccupancyConfig c;
    c.spec = ModelSpec{9, LeakKind::reset, e};
    c.init = InitSpec::parse("ladder");
    c.t = 1e-6;
    c.replicas = 300;
    const OccupancyReport r = occupancy(c);
    EXPECT_EQ(r.survivors, 300u);
    EXPECT_GE(r.estimate, 0.99);
}

TEST(LadderHitting, Thresholds) {
    EXPECT_NEAR(t_prime(16), 0.50391, 5e-6);
    EXPECT_NEAR(t_auxiliary(16), 4.0 + t_prime(16), 1e-15);
}

TEST(LadderHitting, LadderStartHitsAtZero) {
    LadderConfig c;
    c.spec = ModelSpec{6, LeakKind::reset, e};
    c.init = InitSpec::parse("ladder");
    c.replicas = 50;
    const LadderReport r = ladder_hitting(c);
    EXPECT_EQ(r.hits_by_threshold, 50u);
    for (const auto& rec : r.records) EXPECT_EQ(*rec.hit_time, 0.0);
    EXPECT_NEAR(r.horizon, 2.0 * t_prime(6), 1e-15);
}

TEST(AuxOccupancy, NeverVisitsTrapAndDeterministic) {
    AuxOccupancyConfig c;
    c.spec = ModelSpec{6, LeakKind::decrement, e};
    c.burn_in = 0.5;
    c.run_time = 2.0;
    c.replicas = 10;
    c.seed = 4;
    const AuxOccupancyReport a = aux_occupancy(c);
    EXPECT_EQ(a.null_visits, 0u);
    for (const auto& rec : a.records) {
        EXPECT_GE(rec.fraction, 0.0);
        EXPECT_LE(rec.fraction, 1.0);
    }
    c.workers = 3;
    EXPECT_EQ(aux_occupancy_json(aux_occupancy(c), Provenance{}), aux_occupancy_json(a, Provenance{}));
}

TEST(MarginalCheck, SmallRunPasses) {
    MarginalCheckConfig c;
    c.spec = ModelSpec{4, LeakKind::reset, e};
    RngStream r(3, 0);
    c.u0 = sample_s0(4, r);
    c.v0 = sample_s0(4, r);
    c.samples = 1000;
    c.seed = 12;
    const MarginalCheckReport m = marginal_check(c);
    EXPECT_EQ(m.coupled.size(), 1000u);
    EXPECT_NEAR(m.critical, 1.6276 * std::sqrt(2.0 / 1000.0), 1e-4);
    EXPECT_TRUE(m.pass) << m.distance;
}

TEST(Report, EnvelopeCarriesProvenance) {
    Provenance p;
    p.config_json = R"({"n":3})";
    const auto j = nlohmann::ordered_json::parse(ensemble_json(extinction_ensemble(small_ensemble(1)), p));
    EXPECT_EQ(j["schema_version"], report_schema_version);
    EXPECT_EQ(j["config"]["n"], 3);
    EXPECT_EQ(j["tool_version"], std::string(library_version()));
    EXPECT_EQ(j["seed_rule"], std::string(seed_derivation_rule));
    const std::string csv = ensemble_csv(extinction_ensemble(small_ensemble(1)));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "replica,tau,jumps,z_spike,z_leak,stop_reason");
}

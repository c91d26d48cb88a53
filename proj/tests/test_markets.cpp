#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include <coalitiond/errors.hpp>
#include <coalitiond/exact.hpp>
#include <coalitiond/markets.hpp>

#include "support/games.hpp"
#include "support/oracles.hpp"

using namespace coalitiond;
using namespace coalitiond::testing;

namespace {

class TempFile
{
public:
    explicit TempFile(const std::string& content)
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("coalitiond_markets_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".csv");
        std::ofstream(path_) << content;
    }
    ~TempFile() { std::filesystem::remove(path_); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

ForecastRecord record(std::vector<double> f, double omega)
{
    ForecastRecord r;
    r.forecasts = std::move(f);
    r.observation = omega;
    return r;
}

} // namespace

// --- forecasting market --------------------------------------------------------

TEST(ForecastValue, Examples)
{
    const ForecastRecord r = record({0.5, 0.7}, 0.6);
    EXPECT_DOUBLE_EQ(forecast_value(r, Coalition::of({0, 1})), 1.0);
    EXPECT_DOUBLE_EQ(forecast_value(r, Coalition::singleton(0)), 0.9);
    EXPECT_DOUBLE_EQ(forecast_value(r, Coalition::empty()), 0.0);
    EXPECT_DOUBLE_EQ(forecast_value(record({0.3, 0.8}, 0.3), Coalition::singleton(0)), 1.0);
    EXPECT_THROW(forecast_value(r, Coalition::singleton(2)), InputError);
}

TEST(ForecastGame, TwoAgentTable)
{
    const auto g = forecast_to_game(record({0.5, 0.7}, 0.6));
    EXPECT_DOUBLE_EQ(g.value(Coalition::empty()), 0.0);
    EXPECT_NEAR(g.value(Coalition::singleton(0)), 0.9, 1e-15);
    EXPECT_NEAR(g.value(Coalition::singleton(1)), 0.9, 1e-15);
    EXPECT_NEAR(g.value(Coalition::of({0, 1})), 1.0, 1e-15);
}

TEST(SyntheticForecast, NoNoiseGivesEqualSplit)
{
    const DynamicGame d = synthetic_forecast_scenario(4, 20, 100.0, 0.0, 3);
    for (std::size_t k = 0; k < d.horizon(); ++k) {
        const PayoffVector phi = shapley_exact(d.at(k));
        EXPECT_LE((phi.array() - d.at(k).grand_value() / 4.0).abs().maxCoeff(), 1e-12);
    }
}

TEST(SyntheticForecast, InfiniteSmoothnessIsStatic)
{
    const DynamicGame d = synthetic_forecast_scenario(3, 10, std::numeric_limits<double>::infinity(), 0.05, 5);
    for (std::size_t k = 1; k < d.horizon(); ++k)
        for (Coalition::Mask m = 0; m < 8; ++m)
            EXPECT_EQ(d.at(k).value(Coalition{m}), d.at(0).value(Coalition{m}));
}

TEST(SyntheticForecast, Deterministic)
{
    const auto a = synthetic_forecast_records({5, 30, 50.0, 0.05, 8, 5.0});
    const auto b = synthetic_forecast_records({5, 30, 50.0, 0.05, 8, 5.0});
    ASSERT_EQ(a.size(), 30u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].forecasts, b[k].forecasts);
        EXPECT_EQ(a[k].observation, b[k].observation);
        EXPECT_DOUBLE_EQ(a[k].timestamp, 5.0 * static_cast<double>(k));
        for (double f : a[k].forecasts) {
            EXPECT_GE(f, 0.0);
            EXPECT_LE(f, 1.0);
        }
    }
}

TEST(SyntheticForecast, RejectsBadParameters)
{
    EXPECT_THROW(synthetic_forecast_scenario(0, 10, 1.0, 0.1, 0), InputError);
    EXPECT_THROW(synthetic_forecast_scenario(3, 10, 0.0, 0.1, 0), InputError);
    EXPECT_THROW(synthetic_forecast_scenario(3, 10, 1.0, -0.1, 0), InputError);
}

// --- electricity market ----------------------------------------------------------

TEST(ElectricityValue, WorkedExample)
{
    const MarketSnapshot snap = worked_market();
    EXPECT_NEAR(electricity_value(snap, Coalition::grand(4)), 1.7, 1e-12);
    EXPECT_DOUBLE_EQ(electricity_value(snap, Coalition::of({0, 1})), 0.0);
    EXPECT_DOUBLE_EQ(electricity_value(snap, Coalition::of({1, 3})), 0.0);
    EXPECT_DOUBLE_EQ(electricity_value(snap, Coalition::empty()), 0.0);
}

TEST(ElectricityValue, WorkedExampleTrades)
{
    const auto trades = merit_order_trades(worked_market(), Coalition::grand(4));
    double traded = 0.0;
    for (const auto& t : trades)
        traded += t.quantity;
    EXPECT_NEAR(traded, 5.0, 1e-12);
    ASSERT_FALSE(trades.empty());
    EXPECT_EQ(trades.front().buyer, 2u);
    EXPECT_EQ(trades.front().seller, 0u);
}

TEST(ElectricityValue, MatchesVertexOracle)
{
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(t % 6);
        const MarketSnapshot snap = random_snapshot(n, rng);
        for (Coalition::Mask m = 0; m < (Coalition::Mask{1} << n); ++m)
            ASSERT_NEAR(electricity_value(snap, Coalition{m}), welfare_by_vertices(snap, Coalition{m}), 1e-9)
                << "snapshot " << t << " coalition " << Coalition{m}.to_string();
    }
}

TEST(ElectricityValue, MonotoneInCoalitions)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        const MarketSnapshot snap = random_snapshot(5, rng);
        const auto g = snapshot_to_game(snap);
        for (Coalition::Mask m = 0; m < 32; ++m)
            for (AgentIndex i = 0; i < 5; ++i)
                EXPECT_GE(g.value(Coalition{m}.with(i)), g.value(Coalition{m}) - 1e-12);
    }
}

TEST(SnapshotGame, OneSellerOneBuyer)
{
    MarketSnapshot snap;
    snap.offers = {{0, Side::seller, 3.0, 0.1}, {1, Side::buyer, 2.0, 0.4}};
    const auto g = snapshot_to_game(snap);
    EXPECT_NEAR(g.grand_value(), 2.0 * 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(g.value(Coalition::singleton(0)), 0.0);
    EXPECT_DOUBLE_EQ(g.value(Coalition::singleton(1)), 0.0);
}

TEST(SnapshotGame, AllBuyersIsZero)
{
    MarketSnapshot snap;
    snap.offers = {{0, Side::buyer, 3.0, 0.5}, {1, Side::buyer, 2.0, 0.4}, {2, Side::buyer, 1.0, 0.9}};
    const auto g = snapshot_to_game(snap);
    for (Coalition::Mask m = 0; m < 8; ++m)
        EXPECT_EQ(g.value(Coalition{m}), 0.0);
}

TEST(SnapshotGame, RejectsMisindexedOffers)
{
    MarketSnapshot snap;
    snap.offers = {{1, Side::buyer, 3.0, 0.5}};
    EXPECT_THROW(snapshot_to_game(snap), InputError);
}

TEST(SyntheticElectricity, ShapeAndDeterminism)
{
    const ElectricityScenario sc{10, 4, 37, 10.0, 1};
    const auto a = synthetic_electricity_snapshots(sc);
    const auto b = synthetic_electricity_snapshots(sc);
    ASSERT_EQ(a.size(), 37u);
    for (std::size_t k = 0; k < a.size(); ++k) {
        ASSERT_EQ(a[k].offers.size(), 10u);
        for (std::size_t i = 0; i < 10; ++i) {
            EXPECT_EQ(a[k].offers[i].agent, i);
            EXPECT_EQ(a[k].offers[i].quantity, b[k].offers[i].quantity);
            EXPECT_GE(a[k].offers[i].quantity, 0.0);
        }
    }
    EXPECT_THROW(synthetic_electricity_snapshots({3, 4, 10, 10.0, 0}), InputError);
}

TEST(Side, StringRoundTrip)
{
    EXPECT_EQ(side_from_string(to_string(Side::buyer)), Side::buyer);
    EXPECT_EQ(side_from_string(to_string(Side::seller)), Side::seller);
    EXPECT_THROW(side_from_string("broker"), InputError);
}

// --- ingestion -------------------------------------------------------------------

TEST(Ingest, ForecastAtSourceResolutionUnchanged)
{
    const TempFile f("timestamp,f_1,f_2,observation\n0,0.5,0.7,0.6\n10,0.4,0.2,0.3\n");
    const auto recs = std::get<std::vector<ForecastRecord>>(ingest_timeseries(f.path(), TimeseriesSchema::forecast));
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[1].forecasts, (std::vector<double>{0.4, 0.2}));
    const auto same =
        std::get<std::vector<ForecastRecord>>(ingest_timeseries(f.path(), TimeseriesSchema::forecast, 10.0));
    ASSERT_EQ(same.size(), 2u);
    EXPECT_EQ(same[1].observation, 0.3);
}

TEST(Ingest, ForecastMidpointsInserted)
{
    const TempFile f("timestamp,f_1,observation\n0,0.2,0.4\n10,0.6,0.8\n20,0.0,0.0\n");
    const auto recs =
        std::get<std::vector<ForecastRecord>>(ingest_timeseries(f.path(), TimeseriesSchema::forecast, 5.0));
    ASSERT_EQ(recs.size(), 5u);
    EXPECT_DOUBLE_EQ(recs[1].timestamp, 5.0);
    EXPECT_NEAR(recs[1].forecasts[0], 0.4, 1e-15);
    EXPECT_NEAR(recs[1].observation, 0.6, 1e-15);
    EXPECT_NEAR(recs[3].forecasts[0], 0.3, 1e-15);
    EXPECT_EQ(recs[4].k, 4u);
}

TEST(Ingest, MalformedNumberNamesTheRow)
{
    const TempFile f("timestamp,f_1,observation\n0,0.1,0.1\n1,0.1,0.1\n2,0.1,0.1\n3,0.1,0.1\n4,0.1,0.1\n"
                     "5,0.1x,0.1\n");
    try {
        ingest_timeseries(f.path(), TimeseriesSchema::forecast);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.row(), 7u);
        EXPECT_NE(std::string(e.what()).find("row 7"), std::string::npos);
    }
}

TEST(Ingest, RejectsBadForecastFiles)
{
    const TempFile non_monotone("timestamp,f_1,observation\n5,0.1,0.1\n5,0.2,0.2\n");
    EXPECT_THROW(ingest_timeseries(non_monotone.path(), TimeseriesSchema::forecast), ParseError);
    const TempFile out_of_range("timestamp,f_1,observation\n0,1.5,0.1\n");
    EXPECT_THROW(ingest_timeseries(out_of_range.path(), TimeseriesSchema::forecast), ParseError);
    const TempFile bad_header("time,f_1,obs\n0,0.1,0.1\n");
    EXPECT_THROW(ingest_timeseries(bad_header.path(), TimeseriesSchema::forecast), ParseError);
    EXPECT_THROW(ingest_timeseries("/nonexistent/series.csv", TimeseriesSchema::forecast), InputError);
}

TEST(Ingest, IsoTimestamps)
{
    EXPECT_DOUBLE_EQ(parse_timestamp("1970-01-01T01:30"), 90.0);
    EXPECT_DOUBLE_EQ(parse_timestamp("1970-01-02 00:00:00"), 1440.0);
    EXPECT_DOUBLE_EQ(parse_timestamp("12.5"), 12.5);
    EXPECT_THROW(parse_timestamp("yesterday"), ParseError);
}

TEST(Ingest, ElectricityRowsGroupedByInstant)
{
    const TempFile f("timestamp,agent,side,quantity,price\n"
                     "0,0,seller,5,0.1\n0,1,buyer,4,0.5\n"
                     "10,0,seller,3,0.1\n10,1,buyer,2,0.5\n");
    const auto snaps = std::get<std::vector<MarketSnapshot>>(ingest_timeseries(f.path(), TimeseriesSchema::electricity));
    ASSERT_EQ(snaps.size(), 2u);
    EXPECT_EQ(snaps[1].offers[0].side, Side::seller);
    EXPECT_NEAR(electricity_value(snaps[0], Coalition::grand(2)), 4 * 0.4, 1e-12);

    const auto fine =
        std::get<std::vector<MarketSnapshot>>(ingest_timeseries(f.path(), TimeseriesSchema::electricity, 5.0));
    ASSERT_EQ(fine.size(), 3u);
    EXPECT_NEAR(fine[1].offers[0].quantity, 4.0, 1e-12);
    EXPECT_NEAR(fine[1].offers[1].quantity, 3.0, 1e-12);
}

TEST(Ingest, ElectricityInterpolationCrossesSides)
{
    // net quantity goes from +2 (buying) to -2 (selling); the midpoint is zero
    const TempFile f("timestamp,agent,side,quantity,price\n0,0,buyer,2,0.3\n10,0,seller,2,0.1\n");
    const auto fine =
        std::get<std::vector<MarketSnapshot>>(ingest_timeseries(f.path(), TimeseriesSchema::electricity, 5.0));
    ASSERT_EQ(fine.size(), 3u);
    EXPECT_NEAR(fine[1].offers[0].quantity, 0.0, 1e-12);
    EXPECT_NEAR(fine[1].offers[0].price, 0.2, 1e-12);
    EXPECT_EQ(fine[2].offers[0].side, Side::seller);
}

TEST(Ingest, RejectsBadElectricityFiles)
{
    const TempFile twice("timestamp,agent,side,quantity,price\n0,0,seller,5,0.1\n0,0,buyer,4,0.5\n");
    EXPECT_THROW(ingest_timeseries(twice.path(), TimeseriesSchema::electricity), ParseError);
    const TempFile bad_side("timestamp,agent,side,quantity,price\n0,0,broker,5,0.1\n");
    EXPECT_THROW(ingest_timeseries(bad_side.path(), TimeseriesSchema::electricity), ParseError);
    const TempFile negative("timestamp,agent,side,quantity,price\n0,0,seller,-5,0.1\n");
    EXPECT_THROW(ingest_timeseries(negative.path(), TimeseriesSchema::electricity), ParseError);
}

// --- drift game ----------------------------------------------------------------

TEST(DriftGame, ZeroDriftIsStaticAndConvex)
{
    const DynamicGame d = synthetic_drift_game(4, 5, 0.0, 2);
    for (std::size_t k = 1; k < 5; ++k)
        EXPECT_EQ(d.at(k).grand_value(), d.at(0).grand_value());
    const auto& g = d.at(0);
    for (Coalition::Mask s = 0; s < 16; ++s)
        for (Coalition::Mask t = 0; t < 16; ++t)
            EXPECT_GE(g.value(Coalition{s | t}) + g.value(Coalition{s & t}),
                      g.value(Coalition{s}) + g.value(Coalition{t}) - 1e-12);
}

TEST(DriftGame, DeterministicAndValidated)
{
    const DynamicGame a = synthetic_drift_game(3, 10, 0.05, 4);
    const DynamicGame b = synthetic_drift_game(3, 10, 0.05, 4);
    for (std::size_t k = 0; k < 10; ++k)
        EXPECT_EQ(a.at(k).grand_value(), b.at(k).grand_value());
    EXPECT_THROW(synthetic_drift_game(3, 10, -1.0, 0), InputError);
}

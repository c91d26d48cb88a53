#include "coalitiond/markets.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "coalitiond/errors.hpp"

namespace coalitiond {

// --- forecasting -------------------------------------------------------------

double forecast_value(const ForecastRecord& record, Coalition s)
{
    if (s.is_empty())
        return 0.0;
    if (s.span() > record.forecasts.size())
        throw InputError("coalition " + s.to_string() + " outside a forecast record of " +
                         std::to_string(record.forecasts.size()) + " agents");
    double pooled = 0.0;
    for (auto i : s.members())
        pooled += record.forecasts[i];
    pooled /= s.size();
    return 1.0 - std::abs(pooled - record.observation);
}

InstantaneousGame forecast_to_game(const ForecastRecord& record)
{
    return InstantaneousGame::tabulate(record.forecasts.size(),
                                       [&record](Coalition s) { return forecast_value(record, s); });
}

DynamicGame forecast_dynamic_game(const std::vector<ForecastRecord>& records)
{
    DynamicGame g;
    for (const auto& r : records)
        g.push_back(forecast_to_game(r));
    return g;
}

namespace {

// Random walk reflected into [lo, hi].
double reflect(double x, double lo, double hi)
{
    const double width = hi - lo;
    if (width <= 0.0)
        return lo;
    double y = std::fmod(x - lo, 2.0 * width);
    if (y < 0.0)
        y += 2.0 * width;
    return lo + (y <= width ? y : 2.0 * width - y);
}

} // namespace

std::vector<ForecastRecord> synthetic_forecast_records(const ForecastScenario& sc)
{
    if (sc.n_agents == 0 || sc.n_agents > kMaxDenseAgents)
        throw InputError("forecast scenario needs 1.." + std::to_string(kMaxDenseAgents) + " agents");
    if (!(sc.smoothness > 0.0) || sc.noise < 0.0)
        throw InputError("smoothness must be > 0 and noise >= 0");

    std::mt19937_64 rng(sc.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double step = std::isinf(sc.smoothness) ? 0.0 : 1.0 / sc.smoothness;

    double omega = 0.2 + 0.6 * unit(rng);
    std::vector<double> latent(sc.n_agents);
    for (auto& z : latent)
        z = 2.0 * unit(rng) - 1.0;

    std::vector<ForecastRecord> out;
    out.reserve(sc.horizon);
    for (std::size_t k = 0; k < sc.horizon; ++k) {
        ForecastRecord r;
        r.k = k;
        r.timestamp = static_cast<double>(k) * sc.resolution_minutes;
        r.observation = omega;
        r.forecasts.resize(sc.n_agents);
        for (std::size_t i = 0; i < sc.n_agents; ++i) {
            const double scale = sc.noise * static_cast<double>(i + 1) / static_cast<double>(sc.n_agents);
            r.forecasts[i] = std::clamp(omega + scale * latent[i], 0.0, 1.0);
        }
        out.push_back(std::move(r));

        // draws happen even when step == 0 so the stream does not depend on smoothness
        const double d_omega = normal(rng);
        omega = reflect(omega + step * d_omega, 0.0, 1.0);
        for (auto& z : latent)
            z = reflect(z + step * normal(rng), -1.0, 1.0);
    }
    return out;
}

DynamicGame synthetic_forecast_scenario(std::size_t n_agents, std::size_t horizon, double smoothness, double noise,
                                        std::uint64_t seed)
{
    ForecastScenario sc;
    sc.n_agents = n_agents;
    sc.horizon = horizon;
    sc.smoothness = smoothness;
    sc.noise = noise;
    sc.seed = seed;
    return forecast_dynamic_game(synthetic_forecast_records(sc));
}

// --- electricity -------------------------------------------------------------

Side side_from_string(const std::string& s)
{
    if (s == "buyer")
        return Side::buyer;
    if (s == "seller")
        return Side::seller;
    throw InputError("side must be \"buyer\" or \"seller\", got \"" + s + "\"");
}

std::string to_string(Side s)
{
    return s == Side::buyer ? "buyer" : "seller";
}

namespace {

struct Book
{
    std::vector<const MarketAgentOffer*> buyers;
    std::vector<const MarketAgentOffer*> sellers;
};

Book order_book(const MarketSnapshot& snap, Coalition s)
{
    if (s.span() > snap.offers.size())
        throw InputError("coalition " + s.to_string() + " outside a market of " + std::to_string(snap.offers.size()) +
                         " agents");
    Book b;
    for (auto i : s.members()) {
        const auto& o = snap.offers[i];
        if (o.quantity <= 0.0)
            continue;
        (o.side == Side::buyer ? b.buyers : b.sellers).push_back(&o);
    }
    std::stable_sort(b.buyers.begin(), b.buyers.end(), [](auto* x, auto* y) {
        return x->price > y->price || (x->price == y->price && x->agent < y->agent);
    });
    std::stable_sort(b.sellers.begin(), b.sellers.end(), [](auto* x, auto* y) {
        return x->price < y->price || (x->price == y->price && x->agent < y->agent);
    });
    return b;
}

template <typename OnTrade>
double clear(const Book& book, OnTrade&& on_trade)
{
    double welfare = 0.0;
    std::size_t bi = 0, si = 0;
    double b_left = book.buyers.empty() ? 0.0 : book.buyers[0]->quantity;
    double s_left = book.sellers.empty() ? 0.0 : book.sellers[0]->quantity;
    while (bi < book.buyers.size() && si < book.sellers.size()) {
        const auto* b = book.buyers[bi];
        const auto* s = book.sellers[si];
        if (b->price <= s->price)
            break;
        const double q = std::min(b_left, s_left);
        welfare += q * (b->price - s->price);
        on_trade(Trade{b->agent, s->agent, q});
        b_left -= q;
        s_left -= q;
        if (b_left <= 0.0 && ++bi < book.buyers.size())
            b_left = book.buyers[bi]->quantity;
        if (s_left <= 0.0 && ++si < book.sellers.size())
            s_left = book.sellers[si]->quantity;
    }
    return welfare;
}

} // namespace

double electricity_value(const MarketSnapshot& snapshot, Coalition s)
{
    if (s.is_empty())
        return 0.0;
    return clear(order_book(snapshot, s), [](const Trade&) {});
}

std::vector<Trade> merit_order_trades(const MarketSnapshot& snapshot, Coalition s)
{
    std::vector<Trade> trades;
    clear(order_book(snapshot, s), [&trades](const Trade& t) { trades.push_back(t); });
    return trades;
}

namespace {

void check_snapshot(const MarketSnapshot& snap)
{
    for (std::size_t i = 0; i < snap.offers.size(); ++i) {
        const auto& o = snap.offers[i];
        if (o.agent != i)
            throw InputError("snapshot " + std::to_string(snap.k) + ": offers must be indexed by agent");
        if (!(o.quantity >= 0.0) || !(o.price >= 0.0))
            throw InputError("snapshot " + std::to_string(snap.k) + ": quantity and price must be >= 0");
    }
}

} // namespace

InstantaneousGame snapshot_to_game(const MarketSnapshot& snapshot)
{
    check_snapshot(snapshot);
    return InstantaneousGame::tabulate(snapshot.offers.size(),
                                       [&snapshot](Coalition s) { return electricity_value(snapshot, s); });
}

DynamicGame electricity_dynamic_game(const std::vector<MarketSnapshot>& snapshots)
{
    DynamicGame g;
    for (const auto& s : snapshots)
        g.push_back(snapshot_to_game(s));
    return g;
}

std::vector<MarketSnapshot> synthetic_electricity_snapshots(const ElectricityScenario& sc)
{
    if (sc.n_agents == 0 || sc.n_agents > kMaxDenseAgents)
        throw InputError("electricity scenario needs 1.." + std::to_string(kMaxDenseAgents) + " agents");
    if (sc.n_sellers > sc.n_agents)
        throw InputError("more sellers than agents");

    std::mt19937_64 rng(sc.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);

    struct Profile
    {
        double capacity; // PV peak or base load, kWh per interval
        double price;
        double level;    // cloud cover factor or load multiplier
    };
    std::vector<Profile> agents(sc.n_agents);
    for (std::size_t i = 0; i < sc.n_agents; ++i) {
        if (i < sc.n_sellers)
            agents[i] = {2.0 + 4.0 * unit(rng), 0.04 + 0.08 * unit(rng), 0.7 + 0.3 * unit(rng)};
        else
            agents[i] = {0.5 + 1.5 * unit(rng), 0.15 + 0.15 * unit(rng), 1.0};
    }

    const double pi = std::acos(-1.0);
    std::vector<MarketSnapshot> out;
    out.reserve(sc.source_steps);
    for (std::size_t k = 0; k < sc.source_steps; ++k) {
        // daylight bell over the window, strictly positive at both ends
        const double phase = (static_cast<double>(k) + 1.0) / (static_cast<double>(sc.source_steps) + 1.0);
        const double sun = std::sin(pi * phase);
        MarketSnapshot snap;
        snap.k = k;
        snap.timestamp = static_cast<double>(k) * sc.source_resolution_minutes;
        for (std::size_t i = 0; i < sc.n_agents; ++i) {
            auto& a = agents[i];
            MarketAgentOffer o;
            o.agent = i;
            if (i < sc.n_sellers) {
                o.side = Side::seller;
                o.quantity = a.capacity * sun * a.level;
                a.level = std::clamp(a.level + 0.12 * normal(rng), 0.2, 1.0);
                a.price = std::clamp(a.price + 0.004 * normal(rng), 0.02, 0.14);
            } else {
                o.side = Side::buyer;
                o.quantity = a.capacity * a.level;
                a.level = std::clamp(a.level + 0.1 * normal(rng), 0.4, 1.8);
                a.price = std::clamp(a.price + 0.006 * normal(rng), 0.14, 0.35);
            }
            o.price = std::max(0.0, a.price);
            o.quantity = std::max(0.0, o.quantity);
            snap.offers.push_back(o);
        }
        out.push_back(std::move(snap));
    }
    return out;
}

// --- interpolation -------------------------------------------------------------

namespace {

std::vector<double> grid(double t0, double t1, double res)
{
    if (!(res > 0.0))
        throw InputError("interpolation resolution must be > 0");
    std::vector<double> g;
    const double eps = 1e-9 * std::max(1.0, std::abs(t1));
    for (std::size_t j = 0;; ++j) {
        const double t = t0 + static_cast<double>(j) * res;
        if (t > t1 + eps)
            break;
        g.push_back(t);
    }
    return g;
}

// Index i with t_i <= t <= t_{i+1} (clamped) and the weight of t_{i+1}.
template <typename T>
std::pair<std::size_t, double> bracket(const std::vector<T>& rows, double t)
{
    auto it = std::upper_bound(rows.begin(), rows.end(), t, [](double v, const T& r) { return v < r.timestamp; });
    std::size_t hi = static_cast<std::size_t>(it - rows.begin());
    if (hi == 0)
        return {0, 0.0};
    if (hi >= rows.size())
        return {rows.size() - 1, 0.0};
    const std::size_t lo = hi - 1;
    const double span = rows[hi].timestamp - rows[lo].timestamp;
    return {lo, span > 0.0 ? (t - rows[lo].timestamp) / span : 0.0};
}

} // namespace

std::vector<ForecastRecord> interpolate(const std::vector<ForecastRecord>& records, double resolution_minutes)
{
    if (records.empty())
        return {};
    std::vector<ForecastRecord> out;
    for (double t : grid(records.front().timestamp, records.back().timestamp, resolution_minutes)) {
        auto [lo, w] = bracket(records, t);
        const auto& a = records[lo];
        const auto& b = records[std::min(lo + 1, records.size() - 1)];
        ForecastRecord r;
        r.k = out.size();
        r.timestamp = t;
        r.observation = (1.0 - w) * a.observation + w * b.observation;
        r.forecasts.resize(a.forecasts.size());
        for (std::size_t i = 0; i < a.forecasts.size(); ++i)
            r.forecasts[i] = (1.0 - w) * a.forecasts[i] + w * b.forecasts[i];
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<MarketSnapshot> interpolate(const std::vector<MarketSnapshot>& snapshots, double resolution_minutes)
{
    if (snapshots.empty())
        return {};
    auto signed_quantity = [](const MarketAgentOffer& o) { return o.side == Side::buyer ? o.quantity : -o.quantity; };
    std::vector<MarketSnapshot> out;
    for (double t : grid(snapshots.front().timestamp, snapshots.back().timestamp, resolution_minutes)) {
        auto [lo, w] = bracket(snapshots, t);
        const auto& a = snapshots[lo];
        const auto& b = snapshots[std::min(lo + 1, snapshots.size() - 1)];
        MarketSnapshot s;
        s.k = out.size();
        s.timestamp = t;
        for (std::size_t i = 0; i < a.offers.size(); ++i) {
            const auto& oa = a.offers[i];
            const auto& ob = b.offers[i];
            const double q = (1.0 - w) * signed_quantity(oa) + w * signed_quantity(ob);
            MarketAgentOffer o;
            o.agent = i;
            o.price = (1.0 - w) * oa.price + w * ob.price;
            if (q > 0.0)
                o.side = Side::buyer;
            else if (q < 0.0)
                o.side = Side::seller;
            else
                o.side = w < 0.5 ? oa.side : ob.side;
            o.quantity = std::abs(q);
            s.offers.push_back(o);
        }
        out.push_back(std::move(s));
    }
    return out;
}

// --- CSV ingestion -------------------------------------------------------------

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (cell.empty() || pos != cell.size() || !std::isfinite(v))
        throw ParseError("malformed number \"" + cell + "\" in column " + column, row);
    return v;
}

void check_unit_interval(double v, std::size_t row, const std::string& column)
{
    if (v < 0.0 || v > 1.0)
        throw ParseError("value " + std::to_string(v) + " in column " + column + " outside [0, 1]", row);
}

} // namespace

double parse_timestamp(const std::string& cell)
{
    std::size_t pos = 0;
    try {
        const double v = std::stod(cell, &pos);
        if (pos == cell.size() && std::isfinite(v))
            return v;
    } catch (const std::exception&) {
    }
    for (const char* fmt : {"%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"}) {
        std::tm tm{};
        std::istringstream is(cell);
        is >> std::get_time(&tm, fmt);
        if (!is.fail() && is.peek() == std::char_traits<char>::eof())
            return static_cast<double>(timegm(&tm)) / 60.0;
    }
    throw ParseError("malformed timestamp \"" + cell + "\"");
}

namespace {

double timestamp_at(const std::string& cell, std::size_t row)
{
    try {
        return parse_timestamp(cell);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), row);
    }
}

std::vector<ForecastRecord> read_forecasts(std::istream& in)
{
    std::string line;
    std::size_t row = 0;
    std::size_t n_agents = 0;
    std::vector<ForecastRecord> out;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv(line);
        if (n_agents == 0) {
            if (cells.size() < 3 || cells.front() != "timestamp" || cells.back() != "observation")
                throw ParseError("forecast header must be timestamp,f_1,...,f_N,observation", row);
            n_agents = cells.size() - 2;
            if (n_agents > kMaxDenseAgents)
                throw ParseError("too many forecasters (" + std::to_string(n_agents) + ")", row);
            continue;
        }
        if (cells.size() != n_agents + 2)
            throw ParseError("expected " + std::to_string(n_agents + 2) + " columns, got " +
                                 std::to_string(cells.size()), row);
        ForecastRecord r;
        r.k = out.size();
        r.timestamp = timestamp_at(cells[0], row);
        if (!out.empty() && r.timestamp <= out.back().timestamp)
            throw ParseError("timestamps must be strictly increasing", row);
        for (std::size_t i = 0; i < n_agents; ++i) {
            const std::string col = "f_" + std::to_string(i + 1);
            const double f = parse_number(cells[i + 1], row, col);
            check_unit_interval(f, row, col);
            r.forecasts.push_back(f);
        }
        r.observation = parse_number(cells.back(), row, "observation");
        check_unit_interval(r.observation, row, "observation");
        out.push_back(std::move(r));
    }
    if (n_agents == 0)
        throw ParseError("empty forecast file");
    return out;
}

std::vector<MarketSnapshot> read_snapshots(std::istream& in)
{
    std::string line;
    std::size_t row = 0;
    bool header = false;
    std::vector<MarketSnapshot> out;
    std::vector<std::size_t> first_rows;
    std::size_t n_agents = 0;

    auto close_snapshot = [&](std::size_t at_row) {
        if (out.empty())
            return;
        auto& snap = out.back();
        std::sort(snap.offers.begin(), snap.offers.end(),
                  [](const auto& a, const auto& b) { return a.agent < b.agent; });
        for (std::size_t i = 0; i < snap.offers.size(); ++i)
            if (snap.offers[i].agent != i)
                throw ParseError("instant starting at row " + std::to_string(first_rows.back()) +
                                     " must list agents 0..N-1 exactly once", at_row);
        if (n_agents == 0)
            n_agents = snap.offers.size();
        else if (snap.offers.size() != n_agents)
            throw ParseError("instant starting at row " + std::to_string(first_rows.back()) + " has " +
                                 std::to_string(snap.offers.size()) + " agents, expected " + std::to_string(n_agents),
                             at_row);
    };

    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty())
            continue;
        const auto cells = split_csv(line);
        if (!header) {
            const std::vector<std::string> expected{"timestamp", "agent", "side", "quantity", "price"};
            if (cells != expected)
                throw ParseError("electricity header must be timestamp,agent,side,quantity,price", row);
            header = true;
            continue;
        }
        if (cells.size() != 5)
            throw ParseError("expected 5 columns, got " + std::to_string(cells.size()), row);
        const double t = timestamp_at(cells[0], row);
        if (out.empty() || t != out.back().timestamp) {
            if (!out.empty() && t < out.back().timestamp)
                throw ParseError("timestamps must be non-decreasing", row);
            close_snapshot(row);
            MarketSnapshot s;
            s.k = out.size();
            s.timestamp = t;
            out.push_back(std::move(s));
            first_rows.push_back(row);
        }
        MarketAgentOffer o;
        const double agent = parse_number(cells[1], row, "agent");
        if (agent < 0.0 || agent != std::floor(agent) || agent >= static_cast<double>(kMaxDenseAgents))
            throw ParseError("agent must be an integer in 0.." + std::to_string(kMaxDenseAgents - 1), row);
        o.agent = static_cast<AgentIndex>(agent);
        try {
            o.side = side_from_string(cells[2]);
        } catch (const InputError& e) {
            throw ParseError(e.what(), row);
        }
        o.quantity = parse_number(cells[3], row, "quantity");
        o.price = parse_number(cells[4], row, "price");
        if (o.quantity < 0.0 || o.price < 0.0)
            throw ParseError("quantity and price must be >= 0", row);
        for (const auto& existing : out.back().offers)
            if (existing.agent == o.agent)
                throw ParseError("agent " + std::to_string(o.agent) + " listed twice for one instant", row);
        out.back().offers.push_back(o);
    }
    if (!header)
        throw ParseError("empty electricity file");
    close_snapshot(row);
    return out;
}

} // namespace

Timeseries ingest_timeseries(const std::filesystem::path& path, TimeseriesSchema schema,
                             std::optional<double> resolution_minutes)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open time series " + path.string());
    if (schema == TimeseriesSchema::forecast) {
        auto records = read_forecasts(in);
        if (resolution_minutes)
            records = interpolate(records, *resolution_minutes);
        return records;
    }
    auto snaps = read_snapshots(in);
    if (resolution_minutes)
        snaps = interpolate(snaps, *resolution_minutes);
    return snaps;
}

// --- synthetic drifting games --------------------------------------------------

DynamicGame synthetic_drift_game(std::size_t n_agents, std::size_t horizon, double drift, std::uint64_t seed)
{
    if (n_agents == 0 || n_agents > kMaxDenseAgents)
        throw InputError("drift game needs 1.." + std::to_string(kMaxDenseAgents) + " agents");
    if (!(drift >= 0.0))
        throw InputError("drift must be >= 0");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(n_agents);
    for (auto& x : w)
        x = 0.2 + 0.8 * unit(rng);
    const double n = static_cast<double>(n_agents);

    DynamicGame g;
    for (std::size_t k = 0; k < horizon; ++k) {
        const auto weights = w;
        g.push_back(InstantaneousGame::tabulate(n_agents, [&weights, n](Coalition s) {
            double sum = 0.0;
            for (auto i : s.members())
                sum += weights[i];
            return sum * sum / n;
        }));
        for (auto& x : w)
            x = reflect(x + drift * (2.0 * unit(rng) - 1.0), 0.1, 1.0);
    }
    return g;
}

} // namespace coalitiond

#include "cqed/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace cqed {

SampledCurve sampled(const IOCurve& curve)
{
    SampledCurve s;
    s.x.reserve(curve.points.size());
    for (const auto& p : curve.points) {
        s.x.push_back(p.x);
        s.intensity_out.push_back(p.intensity_out);
        s.intensity_in.push_back(p.intensity_in);
    }
    s.evaluate = [config = curve.config](Real x) { return solve_point(config, x).intensity_in; };
    return s;
}

SampledCurve sample_function(std::function<Real(Real)> f, std::span<const Real> x_grid)
{
    SampledCurve s;
    for (Real x : x_grid) {
        s.x.push_back(x);
        s.intensity_out.push_back(x * x);
        s.intensity_in.push_back(f(x));
    }
    s.evaluate = std::move(f);
    return s;
}

namespace {

int sign_of(Real v) { return (v > 0.0) - (v < 0.0); }

bool close_in_input(Real a, Real b)
{
    return std::abs(a - b) <= kFoldMergeTolerance * std::max({Real(1), std::abs(a), std::abs(b)});
}

// Locates the extremum of a unimodal f on [a, b] by repeated halving on the
// sign of a short central difference at the midpoint.
Real refine_extremum(const std::function<Real(Real)>& f, Real a, Real b, bool maximum)
{
    const Real scale = std::max({Real(1), std::abs(a), std::abs(b)});
    for (int it = 0; it < 200 && (b - a) > 1e-13 * scale; ++it) {
        const Real mid = 0.5 * (a + b);
        const Real h = 1e-3 * (b - a);
        const Real lo = f(mid - h), hi = f(mid + h);
        const bool right = maximum ? hi > lo : hi < lo;
        if (right)
            a = mid - h;
        else
            b = mid + h;
    }
    return 0.5 * (a + b);
}

// Vertex of the parabola through three samples, clamped to the bracket.
Real parabolic_vertex(Real x0, Real f0, Real x1, Real f1, Real x2, Real f2)
{
    const Real d = (x0 - x1) * (x0 - x2) * (x1 - x2);
    const Real a = (x2 * (f1 - f0) + x1 * (f0 - f2) + x0 * (f2 - f1)) / d;
    const Real b = (x2 * x2 * (f0 - f1) + x1 * x1 * (f2 - f0) + x0 * x0 * (f1 - f2)) / d;
    if (a == 0.0) return x1;
    return std::clamp(-b / (2 * a), x0, x2);
}

TurningPoint make_fold(const SampledCurve& c, std::size_t i, FoldKind kind)
{
    const bool maximum = kind == FoldKind::fold_up;
    const std::size_t lo = i - 1, hi = i + 1;
    Real x;
    Real value;
    if (c.evaluate) {
        x = refine_extremum(c.evaluate, c.x[lo], c.x[hi], maximum);
        value = c.evaluate(x);
        // The grid sample can only be beaten, never lost, by refinement.
        const Real grid = c.intensity_in[i];
        if ((maximum && grid > value) || (!maximum && grid < value)) {
            x = c.x[i];
            value = grid;
        }
    } else {
        x = parabolic_vertex(c.x[lo], c.intensity_in[lo], c.x[i], c.intensity_in[i], c.x[hi],
                             c.intensity_in[hi]);
        value = c.intensity_in[i];
    }
    return {x, x * x, value, kind};
}

} // namespace

std::vector<TurningPoint> turning_points(const SampledCurve& c)
{
    std::vector<TurningPoint> folds;
    if (c.size() < 3) return folds;

    // Walk the segment slopes; flat segments inherit the previous sign.
    int prev = 0;
    std::size_t prev_end = 0; // index where the last non-flat segment ended
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const int s = sign_of(c.intensity_in[i + 1] - c.intensity_in[i]);
        if (s == 0) continue;
        if (prev != 0 && s != prev) {
            // Extremum at the sample between the two segments, or inside a flat run.
            const std::size_t at = prev_end == i ? i : (prev_end + i) / 2;
            if (at >= 1 && at + 1 < c.size())
                folds.push_back(make_fold(c, at, prev > 0 ? FoldKind::fold_up : FoldKind::fold_down));
        }
        prev = s;
        prev_end = i + 1;
    }

    // Grazing contacts: adjacent opposite folds at numerically equal input.
    std::vector<TurningPoint> merged;
    for (const auto& f : folds) {
        if (!merged.empty() && merged.back().kind != f.kind &&
            close_in_input(merged.back().intensity_in, f.intensity_in)) {
            merged.pop_back();
            continue;
        }
        merged.push_back(f);
    }
    std::sort(merged.begin(), merged.end(),
              [](const TurningPoint& a, const TurningPoint& b) { return a.x < b.x; });
    return merged;
}

std::vector<HysteresisLoop> hysteresis_loops(std::span<const TurningPoint> folds)
{
    std::vector<HysteresisLoop> loops;
    for (std::size_t i = 0; i + 1 < folds.size(); ++i) {
        if (folds[i].kind == FoldKind::fold_up && folds[i + 1].kind == FoldKind::fold_down) {
            loops.push_back({folds[i], folds[i + 1]});
            ++i;
        }
    }
    return loops;
}

std::vector<BistableRegion> bistable_regions(std::span<const HysteresisLoop> loops)
{
    struct Interval {
        Real lo, hi;
        std::size_t loop;
    };
    std::vector<Interval> iv;
    for (std::size_t k = 0; k < loops.size(); ++k) {
        const Real lo = loops[k].lower_threshold(), hi = loops[k].upper_threshold();
        if (lo < hi) iv.push_back({lo, hi, k});
    }
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) {
        return a.lo < b.lo || (a.lo == b.lo && a.loop < b.loop);
    });

    std::vector<BistableRegion> regions;
    std::vector<Interval> members;
    auto flush = [&]() {
        if (members.empty()) return;
        BistableRegion r{members.front().lo, members.front().hi, 3, {}};
        // Deepest overlap: every simultaneously open loop adds two outputs.
        std::vector<std::pair<Real, int>> events;
        for (const auto& m : members) {
            r.upper_threshold = std::max(r.upper_threshold, m.hi);
            r.loops.push_back(m.loop);
            events.push_back({m.lo, +1});
            events.push_back({m.hi, -1});
        }
        std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
            return a.first < b.first || (a.first == b.first && a.second < b.second);
        });
        int depth = 0, deepest = 0;
        for (const auto& e : events) deepest = std::max(deepest, depth += e.second);
        r.multiplicity = 1 + 2 * deepest;
        std::sort(r.loops.begin(), r.loops.end());
        regions.push_back(std::move(r));
        members.clear();
    };
    for (const auto& i : iv) {
        if (!members.empty()) {
            Real hi = members.front().hi;
            for (const auto& m : members) hi = std::max(hi, m.hi);
            if (i.lo > hi) flush();
        }
        members.push_back(i);
    }
    flush();
    return regions;
}

int multiplicity(const SampledCurve& c, Real q)
{
    int count = 0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
        const bool a = c.intensity_in[i] >= q;
        const bool b = c.intensity_in[i + 1] >= q;
        if (a != b) ++count;
    }
    return count;
}

namespace {

// A stable branch: I_in strictly increasing from start to end. An end that
// is a fold is exclusive: a sweep reaching it has already left the branch.
struct Branch {
    std::vector<Real> x;
    std::vector<Real> in;
    std::vector<Real> out;
    bool lo_fold = false;
    bool hi_fold = false;

    Real lo() const { return in.front(); }
    Real hi() const { return in.back(); }
    bool covers(Real q) const
    {
        return (lo_fold ? q > lo() : q >= lo()) && (hi_fold ? q < hi() : q <= hi());
    }
};

std::vector<Branch> stable_branches(const SampledCurve& c, std::span<const TurningPoint> folds)
{
    // Breakpoints in x: curve start, each fold, curve end.
    struct Mark {
        Real x, in;
        bool fold_up;
        bool fold;
    };
    std::vector<Mark> marks;
    marks.push_back({c.x.front(), c.intensity_in.front(), false, false});
    for (const auto& f : folds)
        marks.push_back({f.x, f.intensity_in, f.kind == FoldKind::fold_up, true});
    marks.push_back({c.x.back(), c.intensity_in.back(), true, false});

    std::vector<Branch> branches;
    for (std::size_t k = 0; k + 1 < marks.size(); ++k) {
        const Mark& a = marks[k];
        const Mark& b = marks[k + 1];
        // Rising pieces run from a fold_down (or the start) to a fold_up (or the end).
        if (a.fold_up || !b.fold_up) continue;
        Branch br;
        br.lo_fold = a.fold;
        br.hi_fold = b.fold;
        br.x.push_back(a.x);
        br.in.push_back(a.in);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c.x[i] <= a.x || c.x[i] >= b.x) continue;
            if (c.intensity_in[i] <= br.in.back() || c.intensity_in[i] >= b.in) continue;
            br.x.push_back(c.x[i]);
            br.in.push_back(c.intensity_in[i]);
        }
        if (b.x > br.x.back() && b.in > br.in.back()) {
            br.x.push_back(b.x);
            br.in.push_back(b.in);
        }
        if (br.x.size() < 2) continue;
        for (Real x : br.x) br.out.push_back(x * x);
        branches.push_back(std::move(br));
    }
    return branches;
}

// Output intensity on a branch at input q (q within the branch range).
Real branch_output(const SampledCurve& c, const Branch& b, Real q)
{
    auto it = std::lower_bound(b.in.begin(), b.in.end(), q);
    if (it == b.in.begin()) return b.out.front();
    if (it == b.in.end()) return b.out.back();
    const std::size_t j = static_cast<std::size_t>(it - b.in.begin());
    if (*it == q) return b.out[j];
    Real xa = b.x[j - 1], xb = b.x[j];
    if (c.evaluate) {
        for (int k = 0; k < 200 && xb - xa > 1e-15 * std::max(Real(1), xb); ++k) {
            const Real mid = 0.5 * (xa + xb);
            if (c.evaluate(mid) < q)
                xa = mid;
            else
                xb = mid;
        }
        const Real x = 0.5 * (xa + xb);
        return x * x;
    }
    const Real t = (q - b.in[j - 1]) / (b.in[j] - b.in[j - 1]);
    const Real x = xa + t * (xb - xa);
    return x * x;
}

} // namespace

HysteresisTrace hysteresis(const SampledCurve& c, SweepDirection direction,
                           std::span<const Real> path)
{
    HysteresisTrace trace{direction, {}, {}};
    if (c.size() < 2 || path.empty()) return trace;
    const bool up = direction == SweepDirection::up;
    for (std::size_t i = 1; i < path.size(); ++i)
        if (up ? path[i] < path[i - 1] : path[i] > path[i - 1])
            throw ConfigError("hysteresis path must be monotone in the sweep direction");

    const auto folds = turning_points(c);
    const auto branches = stable_branches(c, folds);
    if (branches.empty()) return trace;

    // Start on the lowest (up) or highest (down) branch that holds path[0].
    std::optional<std::size_t> current;
    for (std::size_t k = 0; k < branches.size(); ++k) {
        if (!branches[k].covers(path.front())) continue;
        if (!current || !up) current = k;
        if (up) break;
    }
    if (!current) return trace;

    Real last_out = branch_output(c, branches[*current], path.front());
    for (Real q : path) {
        while (!branches[*current].covers(q)) {
            const Branch& b = branches[*current];
            const Real edge = up ? b.hi() : b.lo();
            const Real from = up ? b.out.back() : b.out.front();
            std::optional<std::size_t> next;
            Real best = 0.0;
            for (std::size_t k = 0; k < branches.size(); ++k) {
                if (k == *current || !branches[k].covers(edge)) continue;
                const Real o = branch_output(c, branches[k], edge);
                if (up ? o > from && (!next || o < best) : o < from && (!next || o > best)) {
                    next = k;
                    best = o;
                }
            }
            if (!next) return trace; // swept past the end of the sampled curve
            trace.points.push_back({edge, from});
            trace.points.push_back({edge, best});
            trace.jumps.push_back({edge, from, best});
            current = next;
            last_out = best;
        }
        last_out = branch_output(c, branches[*current], q);
        trace.points.push_back({q, last_out});
    }
    return trace;
}

std::optional<Real> BistabilityReport::outer_lower_threshold() const
{
    std::optional<Real> v;
    for (const auto& l : loops)
        if (!v || l.lower_threshold() < *v) v = l.lower_threshold();
    return v;
}

std::optional<Real> BistabilityReport::outer_upper_threshold() const
{
    std::optional<Real> v;
    for (const auto& l : loops)
        if (!v || l.upper_threshold() > *v) v = l.upper_threshold();
    return v;
}

BistabilityReport analyze(const SampledCurve& curve, int trace_points)
{
    BistabilityReport r;
    r.turning_points = turning_points(curve);
    r.loops = hysteresis_loops(r.turning_points);
    r.regions = bistable_regions(r.loops);
    if (trace_points > 1 && curve.size() >= 2) {
        const Real top = *std::max_element(curve.intensity_in.begin(), curve.intensity_in.end());
        const Real bottom = *std::min_element(curve.intensity_in.begin(), curve.intensity_in.end());
        std::vector<Real> path(trace_points);
        for (int i = 0; i < trace_points; ++i)
            path[i] = bottom + (top - bottom) * static_cast<Real>(i) / (trace_points - 1);
        r.up_trace = hysteresis(curve, SweepDirection::up, path);
        std::reverse(path.begin(), path.end());
        r.down_trace = hysteresis(curve, SweepDirection::down, path);
    }
    return r;
}

namespace {

std::optional<std::size_t> loop_index(const BistabilityReport& r, const TrendSpec& spec)
{
    if (spec.loop >= r.loops.size()) return std::nullopt;
    return spec.from_top ? r.loops.size() - 1 - spec.loop : spec.loop;
}

std::optional<Real> quantity_of(const BistabilityReport& r, const TrendSpec& spec)
{
    const auto k = loop_index(r, spec);
    switch (spec.quantity) {
    case TrendQuantity::outer_lower_threshold: return r.outer_lower_threshold();
    case TrendQuantity::outer_upper_threshold: return r.outer_upper_threshold();
    case TrendQuantity::region_count: return static_cast<Real>(r.regions.size());
    case TrendQuantity::loop_count: return static_cast<Real>(r.loops.size());
    case TrendQuantity::loop_lower_threshold:
        if (k) return r.loops[*k].lower_threshold();
        return std::nullopt;
    case TrendQuantity::loop_upper_threshold:
        if (k) return r.loops[*k].upper_threshold();
        return std::nullopt;
    }
    return std::nullopt;
}

bool per_loop(TrendQuantity q)
{
    return q == TrendQuantity::loop_lower_threshold || q == TrendQuantity::loop_upper_threshold;
}

} // namespace

TrendResult trend_compare(std::span<const BistabilityReport> reports, const TrendSpec& spec)
{
    TrendResult out;
    if (reports.size() < 2) {
        out.comparable = false;
        out.diagnostic = "need at least two reports along the parameter axis";
        return out;
    }
    if (per_loop(spec.quantity)) {
        for (const auto& r : reports) {
            if (r.loops.size() != reports.front().loops.size()) {
                out.comparable = false;
                out.diagnostic = "loop counts differ along the axis; per-loop thresholds are "
                                 "not comparable";
            }
        }
    }
    for (const auto& r : reports) {
        const auto v = quantity_of(r, spec);
        if (!v) {
            out.comparable = false;
            if (out.diagnostic.empty()) out.diagnostic = "quantity undefined for some report";
            out.sequence.push_back(NAN);
        } else {
            out.sequence.push_back(*v);
        }
    }
    if (!out.comparable) return out;

    out.pass = true;
    for (std::size_t i = 1; i < out.sequence.size(); ++i) {
        const Real a = out.sequence[i - 1], b = out.sequence[i];
        bool ok = true;
        switch (spec.order) {
        case TrendOrder::increasing: ok = spec.strict ? b > a : b >= a; break;
        case TrendOrder::decreasing: ok = spec.strict ? b < a : b <= a; break;
        case TrendOrder::constant: ok = a == b; break;
        }
        out.pass = out.pass && ok;
    }
    if (!out.pass) out.diagnostic = "sequence does not follow the expected order";
    return out;
}

std::string to_string(const TrendSpec& s)
{
    std::string q;
    const std::string idx = s.from_top ? "top-" + std::to_string(s.loop) : std::to_string(s.loop);
    switch (s.quantity) {
    case TrendQuantity::outer_lower_threshold: q = "outer_lower_threshold"; break;
    case TrendQuantity::outer_upper_threshold: q = "outer_upper_threshold"; break;
    case TrendQuantity::region_count: q = "region_count"; break;
    case TrendQuantity::loop_count: q = "loop_count"; break;
    case TrendQuantity::loop_lower_threshold:
        q = "loop[" + idx + "].lower_threshold";
        break;
    case TrendQuantity::loop_upper_threshold:
        q = "loop[" + idx + "].upper_threshold";
        break;
    }
    const char* o = s.order == TrendOrder::increasing   ? "increasing"
                    : s.order == TrendOrder::decreasing ? "decreasing"
                                                        : "constant";
    return q + " " + (s.strict || s.order == TrendOrder::constant ? "" : "non-strictly ") + o;
}

namespace {

nlohmann::json fold_json(const TurningPoint& t)
{
    return {{"x", t.x},
            {"I_T", t.intensity_out},
            {"I_in", t.intensity_in},
            {"kind", t.kind == FoldKind::fold_up ? "fold_up" : "fold_down"}};
}

nlohmann::json trace_json(const HysteresisTrace& t)
{
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [in, out] : t.points) pts.push_back({in, out});
    nlohmann::json jumps = nlohmann::json::array();
    for (const auto& j : t.jumps)
        jumps.push_back({{"I_in", j.intensity_in}, {"from_I_T", j.from_intensity_out},
                         {"to_I_T", j.to_intensity_out}});
    return {{"direction", t.direction == SweepDirection::up ? "up" : "down"},
            {"points", pts},
            {"jumps", jumps}};
}

} // namespace

nlohmann::json to_json(const BistabilityReport& r)
{
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& t : r.turning_points) folds.push_back(fold_json(t));

    nlohmann::json regions = nlohmann::json::array();
    for (const auto& g : r.regions)
        regions.push_back({{"I_in_lo", g.lower_threshold},
                           {"I_in_hi", g.upper_threshold},
                           {"multiplicity", g.multiplicity},
                           {"loops", g.loops}});

    nlohmann::json thresholds = nlohmann::json::array();
    for (std::size_t k = 0; k < r.loops.size(); ++k)
        thresholds.push_back({{"loop", k},
                              {"lower", r.loops[k].lower_threshold()},
                              {"upper", r.loops[k].upper_threshold()}});

    nlohmann::json hysteresis = nlohmann::json::array();
    if (r.up_trace) hysteresis.push_back(trace_json(*r.up_trace));
    if (r.down_trace) hysteresis.push_back(trace_json(*r.down_trace));

    nlohmann::json doc{{"turning_points", folds},
                       {"regions", regions},
                       {"thresholds", thresholds},
                       {"hysteresis", hysteresis},
                       {"stability_criterion", "slope: dI_in/dI_T > 0 is stable"}};
    if (auto v = r.outer_lower_threshold()) doc["outer_lower_threshold"] = *v;
    if (auto v = r.outer_upper_threshold()) doc["outer_upper_threshold"] = *v;
    return doc;
}

nlohmann::json to_json(const TrendResult& t)
{
    nlohmann::json seq = nlohmann::json::array();
    for (Real v : t.sequence) {
        if (std::isfinite(v))
            seq.push_back(v);
        else
            seq.push_back(nullptr);
    }
    return {{"pass", t.pass},
            {"comparable", t.comparable},
            {"sequence", seq},
            {"diagnostic", t.diagnostic}};
}

} // namespace cqed

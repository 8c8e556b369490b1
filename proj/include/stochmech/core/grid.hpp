#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace stochmech {

/// How an interval endpoint arises: a singular node of the drift, a cutoff of
/// an unbounded direction, or an ordinary finite boundary.
enum class EndKind { node, truncated, regular };

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    EndKind lo_kind = EndKind::regular;
    EndKind hi_kind = EndKind::regular;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x > lo && x < hi; }
};

/// Splits the line at the given nodes and cuts the two outer pieces at +-x_max.
std::vector<Interval> partition_from_nodes(std::span<const double> nodes, double x_max);

/// One inter-node interval of a grid function: cell-centred samples with
/// midpoint quadrature weights.
struct Segment {
    Interval interval;
    std::vector<double> x;
    std::vector<double> w;
    std::vector<double> values;

    std::size_t size() const { return x.size(); }
    double spacing() const { return interval.length() / static_cast<double>(x.size()); }
    double integral() const;
};

/// A real function sampled on a partition of the line.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::vector<Segment> segments);

    /// Uniform cell-centred grid with `cells` cells on `interval` (first and
    /// last sample half a cell away from the endpoints).
    static GridFunction cells(const Interval& interval, std::size_t cells);

    /// Distributes `total_cells` over the intervals in proportion to length.
    static GridFunction cells(std::span<const Interval> partition, std::size_t total_cells);

    template <class F>
    static GridFunction sample(std::span<const Interval> partition, std::size_t total_cells, F&& f)
    {
        GridFunction g = cells(partition, total_cells);
        for (auto& s : g.segments_)
            for (std::size_t i = 0; i < s.size(); ++i)
                s.values[i] = f(s.x[i]);
        return g;
    }

    /// Same grid, new values.
    template <class F>
    GridFunction map(F&& f) const
    {
        GridFunction g = *this;
        for (auto& s : g.segments_)
            for (std::size_t i = 0; i < s.size(); ++i)
                s.values[i] = f(s.x[i], s.values[i]);
        return g;
    }

    const std::vector<Segment>& segments() const { return segments_; }
    std::vector<Segment>& segments() { return segments_; }
    const Segment& segment(std::size_t k) const { return segments_.at(k); }
    std::size_t segment_count() const { return segments_.size(); }
    std::size_t size() const;

    double integral() const;
    std::vector<double> segment_masses() const;
    double min_value() const;

    /// True when both functions live on the same sample points.
    bool same_grid(const GridFunction& other, double tol = 1e-12) const;

    /// Segment whose open interval contains x, or -1.
    int locate(double x) const;

    /// Piecewise-linear interpolation inside the containing segment; constant
    /// extrapolation to the segment ends, 0 outside every segment.
    double interpolate(double x) const;

    /// All sample abscissae / values concatenated segment by segment.
    std::vector<double> all_x() const;
    std::vector<double> all_values() const;

private:
    std::vector<Segment> segments_;
};

/// CSV with header `x,value` per interval; intervals separated by a blank line.
void write_csv(std::ostream& out, const GridFunction& g);
GridFunction read_csv(std::istream& in);

}  // namespace stochmech

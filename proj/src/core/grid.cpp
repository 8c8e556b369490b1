#include "stochmech/core/grid.hpp"

#include "stochmech/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace stochmech {

std::vector<Interval> partition_from_nodes(std::span<const double> nodes, double x_max)
{
    if (!(x_max > 0.0))
        throw DomainError("x_max", "must be positive");
    std::vector<double> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    for (double n : sorted) {
        if (std::abs(n) >= x_max)
            throw DomainError("x_max", "node " + std::to_string(n) + " lies outside the truncation radius");
    }

    std::vector<Interval> parts;
    double lo = -x_max;
    EndKind lo_kind = EndKind::truncated;
    for (double n : sorted) {
        parts.push_back({lo, n, lo_kind, EndKind::node});
        lo = n;
        lo_kind = EndKind::node;
    }
    parts.push_back({lo, x_max, lo_kind, EndKind::truncated});
    return parts;
}

double Segment::integral() const
{
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        sum += w[i] * values[i];
    return sum;
}

GridFunction::GridFunction(std::vector<Segment> segments) : segments_(std::move(segments))
{
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& s = segments_[k];
        if (s.x.size() != s.w.size() || s.x.size() != s.values.size())
            throw DomainError("segment", "x, weights and values differ in length");
        for (std::size_t i = 1; i < s.x.size(); ++i) {
            if (!(s.x[i] > s.x[i - 1]))
                throw DomainError("segment", "grid must be strictly increasing");
        }
        if (k > 0 && !segments_[k - 1].x.empty() && !s.x.empty() && s.x.front() <= segments_[k - 1].x.back())
            throw DomainError("segment", "intervals overlap");
    }
}

GridFunction GridFunction::cells(const Interval& interval, std::size_t cells)
{
    if (cells < 2)
        throw DomainError("cells", "need at least two cells per interval");
    if (!(interval.hi > interval.lo))
        throw DomainError("interval", "empty interval");
    Segment s;
    s.interval = interval;
    const double h = interval.length() / static_cast<double>(cells);
    s.x.resize(cells);
    s.w.assign(cells, h);
    s.values.assign(cells, 0.0);
    for (std::size_t i = 0; i < cells; ++i)
        s.x[i] = interval.lo + (static_cast<double>(i) + 0.5) * h;
    return GridFunction({std::move(s)});
}

GridFunction GridFunction::cells(std::span<const Interval> partition, std::size_t total_cells)
{
    if (partition.empty())
        throw DomainError("partition", "no intervals");
    double total_length = 0.0;
    for (const auto& iv : partition)
        total_length += iv.length();

    std::vector<Segment> segs;
    for (const auto& iv : partition) {
        const auto n = static_cast<std::size_t>(
            std::max(4.0, std::round(static_cast<double>(total_cells) * iv.length() / total_length)));
        segs.push_back(cells(iv, n).segments_.front());
    }
    return GridFunction(std::move(segs));
}

std::size_t GridFunction::size() const
{
    std::size_t n = 0;
    for (const auto& s : segments_)
        n += s.size();
    return n;
}

double GridFunction::integral() const
{
    double sum = 0.0;
    for (const auto& s : segments_)
        sum += s.integral();
    return sum;
}

std::vector<double> GridFunction::segment_masses() const
{
    std::vector<double> m;
    m.reserve(segments_.size());
    for (const auto& s : segments_)
        m.push_back(s.integral());
    return m;
}

double GridFunction::min_value() const
{
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : segments_)
        for (double v : s.values)
            m = std::min(m, v);
    return m;
}

bool GridFunction::same_grid(const GridFunction& other, double tol) const
{
    if (segments_.size() != other.segments_.size())
        return false;
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        const auto& a = segments_[k];
        const auto& b = other.segments_[k];
        if (a.size() != b.size())
            return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a.x[i] - b.x[i]) > tol * (1.0 + std::abs(a.x[i])))
                return false;
        }
    }
    return true;
}

int GridFunction::locate(double x) const
{
    for (std::size_t k = 0; k < segments_.size(); ++k) {
        if (segments_[k].interval.contains(x))
            return static_cast<int>(k);
    }
    return -1;
}

double GridFunction::interpolate(double x) const
{
    const int k = locate(x);
    if (k < 0)
        return 0.0;
    const auto& s = segments_[static_cast<std::size_t>(k)];
    if (x <= s.x.front())
        return s.values.front();
    if (x >= s.x.back())
        return s.values.back();
    const auto it = std::upper_bound(s.x.begin(), s.x.end(), x);
    const auto j = static_cast<std::size_t>(it - s.x.begin());
    const double t = (x - s.x[j - 1]) / (s.x[j] - s.x[j - 1]);
    return (1.0 - t) * s.values[j - 1] + t * s.values[j];
}

std::vector<double> GridFunction::all_x() const
{
    std::vector<double> out;
    out.reserve(size());
    for (const auto& s : segments_)
        out.insert(out.end(), s.x.begin(), s.x.end());
    return out;
}

std::vector<double> GridFunction::all_values() const
{
    std::vector<double> out;
    out.reserve(size());
    for (const auto& s : segments_)
        out.insert(out.end(), s.values.begin(), s.values.end());
    return out;
}

void write_csv(std::ostream& out, const GridFunction& g)
{
    const auto old_precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    bool first = true;
    for (const auto& s : g.segments()) {
        if (!first)
            out << '\n';
        first = false;
        out << "x,value\n";
        for (std::size_t i = 0; i < s.size(); ++i)
            out << s.x[i] << ',' << s.values[i] << '\n';
    }
    out.precision(old_precision);
}

namespace {

Segment finish_segment(std::vector<double> x, std::vector<double> v, std::size_t line_no)
{
    if (x.size() < 2)
        throw DomainError("csv", "interval ending at line " + std::to_string(line_no) + " has fewer than two rows");
    Segment s;
    const std::size_t n = x.size();
    s.w.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? x[i] - x[i - 1] : x[1] - x[0];
        const double right = i + 1 < n ? x[i + 1] - x[i] : x[n - 1] - x[n - 2];
        s.w[i] = 0.5 * (left + right);
    }
    s.interval.lo = x.front() - 0.5 * s.w.front();
    s.interval.hi = x.back() + 0.5 * s.w.back();
    s.x = std::move(x);
    s.values = std::move(v);
    return s;
}

}  // namespace

GridFunction read_csv(std::istream& in)
{
    std::vector<Segment> segs;
    std::vector<double> xs, vs;
    std::string line;
    std::size_t line_no = 0;
    bool in_segment = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty()) {
            if (in_segment) {
                segs.push_back(finish_segment(std::move(xs), std::move(vs), line_no));
                xs.clear();
                vs.clear();
                in_segment = false;
            }
            continue;
        }
        if (line == "x,value") {
            if (in_segment)
                throw DomainError("csv", "missing blank line before header at line " + std::to_string(line_no));
            in_segment = true;
            continue;
        }
        if (!in_segment)
            throw DomainError("csv", "expected header 'x,value' at line " + std::to_string(line_no));
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw DomainError("csv", "expected 'x,value' row at line " + std::to_string(line_no));
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw DomainError("csv", "malformed number at line " + std::to_string(line_no));
        }
    }
    if (in_segment)
        segs.push_back(finish_segment(std::move(xs), std::move(vs), line_no));
    if (segs.empty())
        throw DomainError("csv", "no data");
    return GridFunction(std::move(segs));
}

}  // namespace stochmech

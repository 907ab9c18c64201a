#include "ccw/chart.hpp"

#include <set>

#include "ccw/errors.hpp"

namespace ccw {

Chart::Chart(std::vector<std::string> names) {
    if (names.empty()) throw InvalidArgument("chart needs at least one coordinate");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw InvalidArgument("empty coordinate name");
        if (!seen.insert(n).second) throw InvalidArgument("duplicate coordinate '" + n + "'");
    }
    if (names.size() > 31) throw InvalidArgument("charts are limited to 31 coordinates");
    names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
    if (!names_) return std::nullopt;
    for (std::size_t i = 0; i < names_->size(); ++i)
        if ((*names_)[i] == name) return i;
    return std::nullopt;
}

std::string Chart::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < dim(); ++i) {
        if (i) s += ",";
        s += name(i);
    }
    return s + ")";
}

void require_same_chart(const Chart& a, const Chart& b, const char* what) {
    if (!(a == b))
        throw ChartMismatch(std::string(what) + ": chart " + a.to_string() + " vs " + b.to_string());
}

PointQ::PointQ(Chart c, std::vector<Rational> x) : chart(std::move(c)), coords(std::move(x)) {
    if (coords.size() != chart.dim())
        throw InvalidArgument("point has " + std::to_string(coords.size()) + " coordinates, chart has " +
                              std::to_string(chart.dim()));
}

std::string PointQ::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) s += ", ";
        s += coords[i].to_string();
    }
    return s + ")";
}

}  // namespace ccw

#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccw/rational.hpp"

namespace ccw {

/// Ordered list of distinct coordinate names. Copies share storage.
class Chart {
public:
    Chart() = default;
    explicit Chart(std::vector<std::string> names);
    Chart(std::initializer_list<std::string> names)
        : Chart(std::vector<std::string>(names)) {}

    std::size_t dim() const { return names_ ? names_->size() : 0; }
    const std::string& name(std::size_t i) const { return (*names_)[i]; }
    const std::vector<std::string>& names() const { return *names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    bool valid() const { return names_ != nullptr; }

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.names_ == b.names_ || (a.names_ && b.names_ && *a.names_ == *b.names_);
    }

    std::string to_string() const;

private:
    std::shared_ptr<const std::vector<std::string>> names_;
};

/// Throws ChartMismatch unless a == b.
void require_same_chart(const Chart& a, const Chart& b, const char* what);

/// Exact evaluation site on a chart.
struct PointQ {
    Chart chart;
    std::vector<Rational> coords;

    PointQ() = default;
    PointQ(Chart c, std::vector<Rational> x);

    const Rational& operator[](std::size_t i) const { return coords[i]; }
    std::string to_string() const;
};

}  // namespace ccw

#include "gvflow/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace gvflow {

HeadField::HeadField(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
        throw std::invalid_argument("field dimensions must be positive");
    }
    values_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

bool HeadField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double HeadField::min_value() const {
    if (values_.empty()) throw std::logic_error("min of empty field");
    return *std::min_element(values_.begin(), values_.end());
}

double HeadField::max_value() const {
    if (values_.empty()) throw std::logic_error("max of empty field");
    return *std::max_element(values_.begin(), values_.end());
}

bool HeadField::operator==(const HeadField& other) const {
    return same_shape(other) &&
           (values_.empty() ||
            std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0);
}

double max_abs_difference(const HeadField& a, const HeadField& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("field shapes differ");
    double m = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
    return m;
}

} // namespace gvflow

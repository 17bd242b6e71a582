#pragma once

#include <cstddef>

namespace wmbo {

// Periodic square [0, L)^2 split into n x n cells; samples live on cell centers.
struct GridSpec {
    double side_length = 1.0;
    int n = 256;

    double cell() const { return side_length / n; }
    double center(int i) const { return (i + 0.5) * side_length / n; }
    std::size_t size() const { return static_cast<std::size_t>(n) * n; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n + j; }
};

bool is_power_of_two(int n);

// Throws UsageError unless L > 0 and n is a power of two >= 4.
void validate(const GridSpec& grid);

}  // namespace wmbo

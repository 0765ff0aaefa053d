#pragma once

#include <cstddef>
#include <vector>

namespace peakcast {

// K deterministic projection directions on the unit sphere in m dimensions.
// Built from the Hammersley low-discrepancy set: coordinate j of point k is
// the radical inverse of k in the j-th prime base, each coordinate scaled to
// an angle in [0, 2*pi) and mapped through hyperspherical coordinates.
struct DirectionSet {
    std::size_t K = 0;
    std::size_t m = 0;
    std::vector<std::vector<double>> vectors;  // K unit vectors, length m
    std::vector<std::vector<double>> angles;   // K tuples of m-1 angles
};

// Digit-reversal radical inverse of index k (k >= 1) in the given base.
double radical_inverse(std::size_t base, std::size_t k);

// Hypercube points in [0,1)^dims, point k built from the first `dims` primes.
std::vector<std::vector<double>> hammersley_points(std::size_t K, std::size_t dims);

// Requires K >= 2m ("far exceed the dimensionality") and m >= 2.
DirectionSet hammersley_directions(std::size_t K, std::size_t m);

}  // namespace peakcast

#include "peakcast/hammersley.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace peakcast {

namespace {

std::vector<std::size_t> first_primes(std::size_t count) {
    std::vector<std::size_t> primes;
    std::size_t candidate = 2;
    while (primes.size() < count) {
        bool is_prime = true;
        for (std::size_t p : primes) {
            if (p * p > candidate) break;
            if (candidate % p == 0) {
                is_prime = false;
                break;
            }
        }
        if (is_prime) primes.push_back(candidate);
        ++candidate;
    }
    return primes;
}

}  // namespace

double radical_inverse(std::size_t base, std::size_t k) {
    double result = 0.0;
    double inv = 1.0 / static_cast<double>(base);
    double scale = inv;
    while (k > 0) {
        result += static_cast<double>(k % base) * scale;
        k /= base;
        scale *= inv;
    }
    return result;
}

std::vector<std::vector<double>> hammersley_points(std::size_t K, std::size_t dims) {
    const auto primes = first_primes(dims);
    std::vector<std::vector<double>> points(K, std::vector<double>(dims));
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t j = 0; j < dims; ++j) {
            points[k][j] = radical_inverse(primes[j], k + 1);
        }
    }
    return points;
}

DirectionSet hammersley_directions(std::size_t K, std::size_t m) {
    if (m < 2) throw std::invalid_argument("hammersley_directions: m must be >= 2");
    if (K < 2 * m) throw std::invalid_argument("hammersley_directions: K must be >= 2m");

    DirectionSet out;
    out.K = K;
    out.m = m;
    out.angles = hammersley_points(K, m - 1);
    for (auto& angle_tuple : out.angles) {
        for (double& a : angle_tuple) a *= 2.0 * std::numbers::pi;
    }
    out.vectors.assign(K, std::vector<double>(m));
    for (std::size_t k = 0; k < K; ++k) {
        double sin_prod = 1.0;
        for (std::size_t j = 0; j + 1 < m; ++j) {
            out.vectors[k][j] = sin_prod * std::cos(out.angles[k][j]);
            sin_prod *= std::sin(out.angles[k][j]);
        }
        out.vectors[k][m - 1] = sin_prod;
    }
    return out;
}

}  // namespace peakcast

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cmlab/manifold.hpp"
#include "cmlab/rng.hpp"

namespace cmlab {

/// Point-set generators used by the sweeps.
///
///   random     i.i.d. uniform (normalized Gaussians on the sphere)
///   lattice    j/N on the circle; a rank-1 lattice with Fibonacci-type
///              generator on higher tori; the Fibonacci spiral on the sphere
///   jittered   each lattice point moved uniformly inside its own cell
///   clustered  a few random centres with tight Gaussian clouds around them
enum class PointFamily { Random, Lattice, Jittered, Clustered };

std::string_view family_name(PointFamily f);
PointFamily parse_family(std::string_view name);
/// Comma-separated family list, or "all".
std::vector<PointFamily> parse_families(std::string_view list);

Point random_point(const Manifold& m, CounterRng& rng);

/// N points of the family; deterministic given the generator state.
std::vector<Point> generate_points(const Manifold& m, PointFamily family, std::size_t n,
                                   CounterRng& rng);

enum class WeightMode { Uniform, Random };

std::string_view weight_mode_name(WeightMode w);
WeightMode parse_weight_mode(std::string_view name);

/// Positive weights summing to 1: all 1/N, or 0.1 + 0.9 u normalized.
std::vector<double> generate_weights(WeightMode mode, std::size_t n, CounterRng& rng);

}  // namespace cmlab

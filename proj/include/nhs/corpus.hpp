#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nhs/grid.hpp"

namespace nhs {

/// One analytic test input: an id, a coarse kind tag, a printable
/// definition, and the closed-form function itself. Closures are total on
/// R^n, so an entry can be sampled on any grid and rescaled analytically
/// (no resampling error from interpolating grid data).
struct CorpusEntry {
    std::string id;
    std::string kind;
    std::string definition;
    std::function<double(std::span<const double>)> fn;

    ScalarField sample(const GridSpec& spec) const { return ScalarField(spec, fn); }

    /// Parabolically rescaled sample lambda * f(lambda x).
    ScalarField sample_scaled(const GridSpec& spec, double lambda) const;
};

/// The fixed 20-entry input family used by the experiment suite: smooth
/// bumps, clipped logarithms (the classical unbounded model of bounded
/// mean oscillation), ramps, lacunary cosine series, seeded random
/// Fourier data, half-space-supported bumps, mean-zero atoms, and
/// interface-symmetric/antisymmetric pairs. All parameters scale with the
/// box half-width, and every random draw flows from `seed` through a
/// pinned uniform mapping, so the same (seed, half_width, dimension)
/// reproduces the family bit for bit on any platform.
std::vector<CorpusEntry> make_corpus(std::uint64_t seed, double half_width, int dimension);

/// "id,kind,definition" CSV of the family; shipped beside results so a
/// reader can re-derive every input.
std::string corpus_manifest(std::uint64_t seed, double half_width, int dimension);

}  // namespace nhs

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>

#include "binabc/bitvector.hpp"
#include "binabc/problems/problem.hpp"
#include "binabc/rng.hpp"

namespace binabc {

/// Architecture search space: directed acyclic graphs on a fixed set of 7
/// ordered vertices (0 is the input, 6 the output, one fixed operation per
/// vertex), with at most 9 edges. A state vector holds the strict upper
/// triangle of the adjacency matrix, row-major: bit index of edge (u, v),
/// u < v, counts the pairs before it.
inline constexpr std::size_t kNasVertices = 7;
inline constexpr std::size_t kNasMaxEdges = 9;
inline constexpr std::size_t kNasBits = kNasVertices * (kNasVertices - 1) / 2;

std::size_t nas_edge_index(std::size_t from, std::size_t to);

/// A decoded, valid architecture: within the edge budget and with a
/// directed path from input to output.
struct NasArchitecture {
    std::uint32_t edge_bits = 0;

    bool has_edge(std::size_t from, std::size_t to) const;
    std::size_t edge_count() const;

    /// Number of distinct input-to-output paths.
    std::uint64_t path_count() const;
};

/// Decode a state vector; disconnected or over-budget graphs are invalid.
std::optional<NasArchitecture> nas_encode(const BitVector& x);
BitVector nas_decode(const NasArchitecture& arch);

/// Pre-evaluated benchmark table over every valid architecture.
class NasTable {
public:
    struct Entry {
        double validation_error = 0.0;
        double test_error = 0.0;
    };

    void insert(std::uint32_t edge_bits, Entry entry);
    std::size_t size() const { return entries_.size(); }
    const Entry* find(std::uint32_t edge_bits) const;

    double min_validation_error() const;
    std::uint32_t min_validation_bits() const;

    void save(std::ostream& out) const;
    void save_file(const std::string& path) const;
    static NasTable load(std::istream& in);
    static NasTable load_file(const std::string& path);

private:
    std::unordered_map<std::uint32_t, Entry> entries_;
    double min_validation_ = 0.0;
    std::uint32_t min_bits_ = 0;
    bool has_min_ = false;
};

struct NasQueryResult {
    double distance = 1.0;  // validation error, or 1.0 for invalid encodings
    bool valid = false;
    double test_error = 1.0;
};

/// Score one state vector against the table. Invalid encodings yield the
/// worst distance without touching the table; a valid encoding missing from
/// the table is a lookup error.
NasQueryResult nas_query(const NasTable& table, const BitVector& x);

/// Landscape shape controls for the synthetic benchmark table. Defaults give
/// a low plateau of well-connected graphs over a steep ramp; lowering `ramp`
/// toward `plateau` flattens the landscape and raising `jitter` blurs the
/// gap between neighbouring entries.
struct NasDifficulty {
    double plateau = 0.03;  // base validation error for well-connected graphs
    double ramp = 0.90;     // validation error at the top of the ramp
    double jitter = 0.02;   // per-entry noise amplitude
};

/// Deterministic synthetic table over all valid architectures. The error
/// landscape is smooth in edge count and path count with small per-entry
/// jitter, and the minimum validation error is unique. Different seeds give
/// different tables.
NasTable nas_synth_table(std::uint64_t seed, const NasDifficulty& difficulty = {});

/// Harness adapter: the simulator is the deterministic table lookup, the
/// prior the low-complexity Boltzmann form over edges.
class NasProblem final : public Problem {
public:
    explicit NasProblem(NasTable table);

    std::size_t dim() const override { return kNasBits; }
    BitVector sample_prior(RngStream& rng) const override;
    double chain_error(const BitVector& x) const override;

    double log_prior(const BitVector& x) const override;
    double simulate_distance(const BitVector& x, RngStream& rng) const override;

    const NasTable& table() const { return table_; }

private:
    NasTable table_;
};

}  // namespace binabc

#pragma once

#include "mvtda/partition.hpp"

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace mvtda {

/// One bar of the zigzag barcode over the interleaved sequence. Positions are
/// 1-based: odd index 2o-1 is the slice at t_o, even index 2o is the link
/// (union or intersection) between t_o and t_{o+1}. Times map odd indices to
/// (o-1)*spacing seconds and even indices to the half-step (o-0.5)*spacing.
struct ZigzagInterval {
    int dim = 0;
    int birth_index = 0;
    int death_index = 0;
    double birth_time = 0.0;
    double death_time = 0.0;
};

struct ZigzagDiagram {
    std::vector<ZigzagInterval> intervals;
    int sequence_length = 0;
};

/// Seconds offset of interleaved position `index`, given the frame spacing.
double zigzag_index_time(int index, double time_spacing);

/// Streaming zigzag persistence over single-simplex insertions and
/// deletions.
///
/// The engine keeps, per dimension, a basis of the cycle space of the
/// current complex in which a marked subset spans the boundary space (each
/// marked column carries an explicit bounding chain). The classes of the
/// unmarked columns form a homology basis; each carries its birth time and
/// whether it was born by an insertion or a deletion, which decides the
/// pairing when a death event must consume one of several involved classes.
///
/// Insertions require all faces present; deletions require the simplex to be
/// maximal. snapshot() marks the current complex as the next position of the
/// zigzag sequence; finish() closes classes still alive and returns every
/// interval clipped to the snapshot positions it covers (intervals living
/// entirely between snapshots are dropped).
class ZigzagEngine {
public:
    explicit ZigzagEngine(int max_report_dim);

    void insert(const Simplex& s);
    void erase(const Simplex& s);
    void snapshot();

    struct RawInterval {
        int dim = 0;
        int first = 0; // 1-based snapshot index
        int last = 0;
    };
    std::vector<RawInterval> finish();

private:
    struct Col {
        std::vector<std::uint32_t> cycle;  // sorted slot ids of dimension d
        std::vector<std::uint32_t> chain;  // bounding chain, dimension d+1 (boundary columns)
        bool boundary = false;
        bool birth_backward = false;
        long birth = 0;
    };
    struct Pending {
        int dim = 0;
        long birth = 0, death = 0; // elementary times, inclusive
    };

    std::vector<std::uint32_t> boundary_slots(const Simplex& s) const;
    std::size_t pick_forward_death(const std::vector<std::size_t>& involved, int d) const;
    std::size_t pick_backward_death(const std::vector<std::size_t>& involved, int d) const;
    void emit(int dim, long birth, long death);

    int max_report_dim_;
    long time_ = 0;
    std::uint32_t next_slot_ = 0;
    std::unordered_map<Simplex, std::uint32_t, SimplexHash> active_;
    std::array<std::vector<Col>, 4> z_; // cycle matrices by simplex dimension
    std::vector<long> snapshots_;
    std::vector<Pending> emitted_;
};

/// Zigzag persistence of an explicit position sequence. Consecutive
/// complexes must be nested one way or the other (the alternating
/// slice/link shape); anything else is a structural error.
ZigzagDiagram zigzag_of_positions(const std::vector<std::vector<Simplex>>& positions,
                                  int max_dim, double time_spacing);

/// Zigzag persistence of H_0..H_max_dim over the interleaved slice/link
/// sequence built by `partition`.
ZigzagDiagram zigzag_persistence(const SliceComplexSequence& seq, int max_dim,
                                 double time_spacing = 0.0);

} // namespace mvtda

#include "mvtda/zigzag.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mvtda {

namespace {

using Slots = std::vector<std::uint32_t>;

Slots xor_slots(const Slots& a, const Slots& b) {
    Slots out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

bool contains_slot(const Slots& v, std::uint32_t slot) {
    return std::binary_search(v.begin(), v.end(), slot);
}

} // namespace

double zigzag_index_time(int index, double time_spacing) {
    if (index % 2)
        return ((index + 1) / 2 - 1) * time_spacing;
    return (index / 2 - 0.5) * time_spacing;
}

ZigzagEngine::ZigzagEngine(int max_report_dim) : max_report_dim_(max_report_dim) {
    if (max_report_dim < 0 || max_report_dim > 2)
        throw std::invalid_argument("ZigzagEngine: max_report_dim must be in [0, 2]");
}

std::vector<std::uint32_t> ZigzagEngine::boundary_slots(const Simplex& s) const {
    Slots bd;
    if (s.dim() == 0) return bd;
    for (int f = 0; f < static_cast<int>(s.n); ++f) {
        auto it = active_.find(s.facet(f));
        if (it == active_.end())
            throw std::invalid_argument("ZigzagEngine::insert: face missing from complex");
        bd.push_back(it->second);
    }
    std::sort(bd.begin(), bd.end());
    return bd;
}

void ZigzagEngine::emit(int dim, long birth, long death) {
    if (dim <= max_report_dim_ && birth <= death) emitted_.push_back({dim, birth, death});
}

// Death by insertion: the sum of the involved classes becomes a boundary.
// The interval consumed belongs to the youngest forward-born class involved;
// if every involved class was born backward, to the oldest of them.
std::size_t ZigzagEngine::pick_forward_death(const std::vector<std::size_t>& involved,
                                             int d) const {
    const auto& cols = z_[static_cast<std::size_t>(d)];
    bool found = false;
    std::size_t best = 0;
    for (std::size_t j : involved) {
        if (cols[j].birth_backward) continue;
        if (!found || cols[j].birth > cols[best].birth) {
            best = j;
            found = true;
        }
    }
    if (found) return best;
    best = involved[0];
    for (std::size_t j : involved)
        if (cols[j].birth < cols[best].birth) best = j;
    return best;
}

// Death by deletion: every involved class has a representative through the
// removed simplex, and exactly one dies. Mirror rule: the youngest
// backward-born class involved; if none was born backward, the oldest.
std::size_t ZigzagEngine::pick_backward_death(const std::vector<std::size_t>& involved,
                                              int d) const {
    const auto& cols = z_[static_cast<std::size_t>(d)];
    bool found = false;
    std::size_t best = 0;
    for (std::size_t j : involved) {
        if (!cols[j].birth_backward) continue;
        if (!found || cols[j].birth > cols[best].birth) {
            best = j;
            found = true;
        }
    }
    if (found) return best;
    best = involved[0];
    for (std::size_t j : involved)
        if (cols[j].birth < cols[best].birth) best = j;
    return best;
}

void ZigzagEngine::insert(const Simplex& s) {
    const int p = s.dim();
    if (p > 3) throw std::invalid_argument("ZigzagEngine: dimension > 3 unsupported");
    if (active_.count(s))
        throw std::invalid_argument("ZigzagEngine::insert: simplex already present");
    const Slots bd = boundary_slots(s);
    ++time_;
    const std::uint32_t slot = next_slot_++;
    active_.emplace(s, slot);

    if (p == 0) {
        z_[0].push_back({{slot}, {}, false, false, time_});
        return;
    }

    // express [boundary of s] over the cycle basis of dimension p-1
    auto& zv = z_[static_cast<std::size_t>(p - 1)];
    std::vector<std::size_t> combo;
    {
        // fresh echelonization with combination tracking
        struct Entry {
            Slots cycle;
            std::vector<std::size_t> combo;
        };
        std::map<std::uint32_t, Entry> by_pivot; // pivot slot -> reduced column
        for (std::size_t j = 0; j < zv.size(); ++j) {
            Entry e{zv[j].cycle, {j}};
            while (!e.cycle.empty()) {
                auto it = by_pivot.find(e.cycle.back());
                if (it == by_pivot.end()) break;
                e.cycle = xor_slots(e.cycle, it->second.cycle);
                std::vector<std::size_t> c;
                std::set_symmetric_difference(e.combo.begin(), e.combo.end(),
                                              it->second.combo.begin(), it->second.combo.end(),
                                              std::back_inserter(c));
                e.combo = std::move(c);
            }
            if (!e.cycle.empty()) {
                const std::uint32_t piv = e.cycle.back();
                by_pivot.emplace(piv, std::move(e));
            }
        }
        Slots target = bd;
        std::vector<std::size_t> acc;
        while (!target.empty()) {
            auto it = by_pivot.find(target.back());
            if (it == by_pivot.end())
                throw std::logic_error("ZigzagEngine: boundary not in cycle span");
            target = xor_slots(target, it->second.cycle);
            std::vector<std::size_t> c;
            std::set_symmetric_difference(acc.begin(), acc.end(), it->second.combo.begin(),
                                          it->second.combo.end(), std::back_inserter(c));
            acc = std::move(c);
        }
        combo = std::move(acc);
    }

    std::vector<std::size_t> involved; // non-boundary members of the combination
    for (std::size_t j : combo)
        if (!zv[j].boundary) involved.push_back(j);

    if (involved.empty()) {
        // birth in H_p: the new simplex plus the bounding chains closes a cycle
        Slots cycle{slot};
        for (std::size_t j : combo) cycle = xor_slots(cycle, zv[j].chain);
        z_[static_cast<std::size_t>(p)].push_back({std::move(cycle), {}, false, false, time_});
        return;
    }

    // death in H_{p-1}
    const std::size_t jstar = pick_forward_death(involved, p - 1);
    emit(p - 1, zv[jstar].birth, time_ - 1);
    Slots sum;
    for (std::size_t j : involved) sum = xor_slots(sum, zv[j].cycle);
    Slots chain{slot};
    for (std::size_t j : combo)
        if (zv[j].boundary) chain = xor_slots(chain, zv[j].chain);
    zv[jstar].cycle = std::move(sum);
    zv[jstar].chain = std::move(chain);
    zv[jstar].boundary = true;
}

void ZigzagEngine::erase(const Simplex& s) {
    const int p = s.dim();
    auto it = active_.find(s);
    if (it == active_.end())
        throw std::invalid_argument("ZigzagEngine::erase: simplex not present");
    const std::uint32_t slot = it->second;
    ++time_;
    active_.erase(it);

    auto& zp = z_[static_cast<std::size_t>(p)];
    std::vector<std::size_t> involved;
    for (std::size_t j = 0; j < zp.size(); ++j)
        if (contains_slot(zp[j].cycle, slot)) involved.push_back(j);

    if (!involved.empty()) {
        // death in H_p: cycles through the removed simplex vanish
        for (std::size_t j : involved)
            if (zp[j].boundary)
                throw std::logic_error("ZigzagEngine: boundary column through a maximal simplex");
        const std::size_t jstar = pick_backward_death(involved, p);
        emit(p, zp[jstar].birth, time_ - 1);
        const Slots rep = zp[jstar].cycle;
        for (std::size_t j : involved)
            if (j != jstar) zp[j].cycle = xor_slots(zp[j].cycle, rep);
        // chains certifying dimension p-1 boundaries may run through the
        // removed simplex; adding the vanishing cycle clears it without
        // changing their boundaries
        if (p >= 1) {
            for (auto& col : z_[static_cast<std::size_t>(p - 1)])
                if (col.boundary && contains_slot(col.chain, slot))
                    col.chain = xor_slots(col.chain, rep);
        }
        zp.erase(zp.begin() + static_cast<std::ptrdiff_t>(jstar));
        return;
    }

    // birth in H_{p-1}: one boundary class loses its bounding chain
    if (p == 0) throw std::logic_error("ZigzagEngine: vertex absent from the cycle basis");
    auto& zv = z_[static_cast<std::size_t>(p - 1)];
    std::vector<std::size_t> cert;
    for (std::size_t j = 0; j < zv.size(); ++j)
        if (zv[j].boundary && contains_slot(zv[j].chain, slot)) cert.push_back(j);
    if (cert.empty())
        throw std::logic_error("ZigzagEngine: no bounding chain through removed simplex");
    const std::size_t j0 = cert[0];
    for (std::size_t idx = 1; idx < cert.size(); ++idx) {
        const std::size_t j = cert[idx];
        zv[j].chain = xor_slots(zv[j].chain, zv[j0].chain);
        zv[j].cycle = xor_slots(zv[j].cycle, zv[j0].cycle);
    }
    zv[j0].chain.clear();
    zv[j0].boundary = false;
    zv[j0].birth = time_;
    zv[j0].birth_backward = true;
}

void ZigzagEngine::snapshot() { snapshots_.push_back(time_); }

std::vector<ZigzagEngine::RawInterval> ZigzagEngine::finish() {
    for (int d = 0; d <= max_report_dim_; ++d)
        for (const auto& col : z_[static_cast<std::size_t>(d)])
            if (!col.boundary) emitted_.push_back({d, col.birth, time_});

    std::vector<RawInterval> out;
    for (const auto& e : emitted_) {
        // snapshot positions with birth <= snapshot time <= death
        const auto lo = std::lower_bound(snapshots_.begin(), snapshots_.end(), e.birth);
        auto hi = std::upper_bound(snapshots_.begin(), snapshots_.end(), e.death);
        if (lo >= hi) continue;
        out.push_back({e.dim, static_cast<int>(lo - snapshots_.begin()) + 1,
                       static_cast<int>(hi - snapshots_.begin())});
    }
    std::sort(out.begin(), out.end(), [](const RawInterval& a, const RawInterval& b) {
        if (a.dim != b.dim) return a.dim < b.dim;
        if (a.first != b.first) return a.first < b.first;
        return a.last < b.last;
    });
    return out;
}

ZigzagDiagram zigzag_of_positions(const std::vector<std::vector<Simplex>>& positions,
                                  int max_dim, double time_spacing) {
    if (positions.empty())
        throw std::invalid_argument("zigzag_of_positions: empty sequence");
    ZigzagEngine engine(max_dim);
    std::vector<Simplex> prev;
    for (std::size_t p = 0; p < positions.size(); ++p) {
        std::vector<Simplex> cur = positions[p];
        std::sort(cur.begin(), cur.end());
        std::vector<Simplex> ins, del;
        std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(),
                            std::back_inserter(ins));
        std::set_difference(prev.begin(), prev.end(), cur.begin(), cur.end(),
                            std::back_inserter(del));
        if (!ins.empty() && !del.empty())
            throw std::runtime_error(
                "zigzag_of_positions: consecutive complexes are not nested (position " +
                std::to_string(p + 1) + ")");
        // deletions run top dimension first so every removal is of a maximal
        // simplex; insertions run faces first
        for (auto rit = del.rbegin(); rit != del.rend(); ++rit) engine.erase(*rit);
        for (const Simplex& s : ins) engine.insert(s);
        engine.snapshot();
        prev = std::move(cur);
    }
    ZigzagDiagram zz;
    zz.sequence_length = static_cast<int>(positions.size());
    for (const auto& raw : engine.finish()) {
        ZigzagInterval iv;
        iv.dim = raw.dim;
        iv.birth_index = raw.first;
        iv.death_index = raw.last;
        iv.birth_time = zigzag_index_time(raw.first, time_spacing);
        iv.death_time = zigzag_index_time(raw.last, time_spacing);
        zz.intervals.push_back(iv);
    }
    return zz;
}

ZigzagDiagram zigzag_persistence(const SliceComplexSequence& seq, int max_dim,
                                 double time_spacing) {
    std::vector<std::vector<Simplex>> positions;
    positions.reserve(static_cast<std::size_t>(seq.sequence_length()));
    for (int p = 1; p <= seq.sequence_length(); ++p) positions.push_back(seq.at_position(p));
    return zigzag_of_positions(positions, max_dim, time_spacing);
}

} // namespace mvtda

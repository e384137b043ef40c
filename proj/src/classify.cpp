#include "gscsp/classify.hpp"

#include <vector>

namespace gscsp {

const char* stairKindName(StairKind k) {
    switch (k) {
    case StairKind::LeGe:
        return "le-ge";
    case StairKind::GeLe:
        return "ge-le";
    case StairKind::LeLe:
        return "le-le";
    case StairKind::GeGe:
        return "ge-ge";
    }
    return "?";
}

namespace {

struct RowSpan {
    int lo = -1; // -1 marks an empty row
    int hi = -1;

    bool empty() const { return lo < 0; }
};

std::vector<RowSpan> rowSpans(const RowConvexConstraint& c) {
    std::vector<RowSpan> spans(static_cast<std::size_t>(c.rowCount()));
    for (int r = 0; r < c.rowCount(); ++r) {
        if (const auto& iv = c.image(r)) {
            spans[static_cast<std::size_t>(r)] = {iv->lo, iv->hi};
        }
    }
    return spans;
}

// Contiguity check; returns spans only when every row is an interval.
std::optional<std::vector<RowSpan>> rowSpansIfRowConvex(const DenseRelation& g) {
    std::vector<RowSpan> spans(static_cast<std::size_t>(g.rows));
    for (int r = 0; r < g.rows; ++r) {
        RowSpan s;
        for (int c = 0; c < g.cols; ++c) {
            if (!g.at(r, c)) {
                continue;
            }
            if (s.lo < 0) {
                s.lo = c;
            } else if (c != s.hi + 1) {
                return std::nullopt;
            }
            s.hi = c;
        }
        spans[static_cast<std::size_t>(r)] = s;
    }
    return spans;
}

bool endpointsMonotone(const std::vector<RowSpan>& spans, bool nondecreasing) {
    const RowSpan* prev = nullptr;
    for (const auto& s : spans) {
        if (s.empty()) {
            continue;
        }
        if (prev != nullptr) {
            if (nondecreasing && (s.lo < prev->lo || s.hi < prev->hi)) {
                return false;
            }
            if (!nondecreasing && (s.lo > prev->lo || s.hi > prev->hi)) {
                return false;
            }
        }
        prev = &s;
    }
    return true;
}

// Connectedness of the reduced form: after dropping empty rows and
// columns, consecutive row images must overlap or be adjacent.
bool connectedReduced(const std::vector<RowSpan>& spans, int cols) {
    std::vector<bool> colUsed(static_cast<std::size_t>(cols), false);
    for (const auto& s : spans) {
        if (s.empty()) {
            continue;
        }
        for (int c = s.lo; c <= s.hi; ++c) {
            colUsed[static_cast<std::size_t>(c)] = true;
        }
    }
    std::vector<int> pos(static_cast<std::size_t>(cols), -1);
    int next = 0;
    for (int c = 0; c < cols; ++c) {
        if (colUsed[static_cast<std::size_t>(c)]) {
            pos[static_cast<std::size_t>(c)] = next++;
        }
    }
    const RowSpan* prev = nullptr;
    for (const auto& s : spans) {
        if (s.empty()) {
            continue;
        }
        if (prev != nullptr) {
            int a = pos[static_cast<std::size_t>(prev->lo)];
            int b = pos[static_cast<std::size_t>(prev->hi)];
            int a2 = pos[static_cast<std::size_t>(s.lo)];
            int b2 = pos[static_cast<std::size_t>(s.hi)];
            if (a2 > b + 1 || b2 < a - 1) {
                return false;
            }
        }
        prev = &s;
    }
    return true;
}

std::vector<std::pair<int, int>> memberTuples(const DenseRelation& g) {
    std::vector<std::pair<int, int>> t;
    for (int r = 0; r < g.rows; ++r) {
        for (int c = 0; c < g.cols; ++c) {
            if (g.at(r, c)) {
                t.emplace_back(r, c);
            }
        }
    }
    return t;
}

// Exhaustive closure checks over all pairs of member tuples. This is a
// validation path, not a solver path; quadratic cost is fine.
void closureFlags(const DenseRelation& g, const std::vector<std::pair<int, int>>& tuples,
                  bool& minClosed, bool& maxClosed) {
    minClosed = true;
    maxClosed = true;
    for (std::size_t a = 0; a < tuples.size(); ++a) {
        for (std::size_t b = a; b < tuples.size(); ++b) {
            const auto& [r1, c1] = tuples[a];
            const auto& [r2, c2] = tuples[b];
            if (!g.at(std::min(r1, r2), std::min(c1, c2))) {
                minClosed = false;
            }
            if (!g.at(std::max(r1, r2), std::max(c1, c2))) {
                maxClosed = false;
            }
            if (!minClosed && !maxClosed) {
                return;
            }
        }
    }
}

bool stairHolds(const DenseRelation& g, const std::vector<std::pair<int, int>>& tuples,
                StairKind kind) {
    const bool rowLe = kind == StairKind::LeGe || kind == StairKind::LeLe;
    const bool colLe = kind == StairKind::GeLe || kind == StairKind::LeLe;
    for (const auto& [r, c] : tuples) {
        const int rFrom = rowLe ? 0 : r;
        const int rTo = rowLe ? r : g.rows - 1;
        const int cFrom = colLe ? 0 : c;
        const int cTo = colLe ? c : g.cols - 1;
        for (int r2 = rFrom; r2 <= rTo; ++r2) {
            for (int c2 = cFrom; c2 <= cTo; ++c2) {
                if (!g.at(r2, c2)) {
                    return false;
                }
            }
        }
    }
    return true;
}

ClassReport buildReport(const DenseRelation& g, const std::optional<std::vector<RowSpan>>& spans,
                        int cols) {
    ClassReport rep;
    rep.rowConvex = spans.has_value();
    if (spans) {
        rep.ds = endpointsMonotone(*spans, true);
        rep.us = endpointsMonotone(*spans, false);
        rep.crc = connectedReduced(*spans, cols);
    }
    auto tuples = memberTuples(g);
    closureFlags(g, tuples, rep.minClosed, rep.maxClosed);
    for (int k = 0; k < kStairKindCount; ++k) {
        rep.staircase[k] = stairHolds(g, tuples, static_cast<StairKind>(k));
    }
    return rep;
}

} // namespace

ClassReport classify(const RowConvexConstraint& c) {
    return buildReport(toDense(c), rowSpans(c), c.colCount());
}

ClassReport classify(const DenseRelation& grid) {
    return buildReport(grid, rowSpansIfRowConvex(grid), grid.cols);
}

bool isDownStaircase(const RowConvexConstraint& c) {
    return endpointsMonotone(rowSpans(c), true);
}

bool isUpStaircase(const RowConvexConstraint& c) {
    return endpointsMonotone(rowSpans(c), false);
}

} // namespace gscsp

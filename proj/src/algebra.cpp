#include "gscsp/algebra.hpp"

#include <algorithm>

#include "gscsp/classify.hpp"

namespace gscsp {

namespace {

thread_local std::uint64_t tlSteps = 0;

void bump(std::uint64_t n = 1) { tlSteps += n; }

enum class Shape { Down, Up };

Shape shapeOf(const RowConvexConstraint& c, const char* op) {
    if (isDownStaircase(c)) {
        return Shape::Down;
    }
    if (isUpStaircase(c)) {
        return Shape::Up;
    }
    throw NotStaircaseError(std::string(op) + ": operand is neither down nor up staircase");
}

Shape commonShape(const RowConvexConstraint& a, const RowConvexConstraint& b, const char* op) {
    const bool aDown = isDownStaircase(a);
    const bool aUp = isUpStaircase(a);
    const bool bDown = isDownStaircase(b);
    const bool bUp = isUpStaircase(b);
    if (aDown && bDown) {
        return Shape::Down;
    }
    if (aUp && bUp) {
        return Shape::Up;
    }
    if ((aDown || aUp) && (bDown || bUp)) {
        throw MixedClassError(std::string(op) + ": operands are staircase constraints of opposite kinds");
    }
    throw NotStaircaseError(std::string(op) + ": operand is neither down nor up staircase");
}

// Index of the nearest non-empty row at or after (resp. at or before)
// each position; -1 when none exists on that side.
std::vector<int> nextNonEmpty(const RowConvexConstraint& c) {
    std::vector<int> next(static_cast<std::size_t>(c.rowCount()), -1);
    int seen = -1;
    for (int r = c.rowCount() - 1; r >= 0; --r) {
        if (c.image(r)) {
            seen = r;
        }
        next[static_cast<std::size_t>(r)] = seen;
        bump();
    }
    return next;
}

std::vector<int> prevNonEmpty(const RowConvexConstraint& c) {
    std::vector<int> prev(static_cast<std::size_t>(c.rowCount()), -1);
    int seen = -1;
    for (int r = 0; r < c.rowCount(); ++r) {
        if (c.image(r)) {
            seen = r;
        }
        prev[static_cast<std::size_t>(r)] = seen;
        bump();
    }
    return prev;
}

} // namespace

std::uint64_t algebraSteps() { return tlSteps; }

void resetAlgebraSteps() { tlSteps = 0; }

RowConvexConstraint transpose(const RowConvexConstraint& c) {
    const Shape shape = shapeOf(c, "transpose");
    const int rows = c.rowCount();
    const int cols = c.colCount();
    std::vector<int> first(static_cast<std::size_t>(cols), -1);
    std::vector<int> last(static_cast<std::size_t>(cols), -1);

    if (shape == Shape::Down) {
        int covered = -1; // highest column covered so far
        for (int r = 0; r < rows; ++r) {
            bump();
            if (const auto& iv = c.image(r)) {
                for (int u = std::max(iv->lo, covered + 1); u <= iv->hi; ++u) {
                    first[static_cast<std::size_t>(u)] = r;
                    bump();
                }
                covered = std::max(covered, iv->hi);
            }
        }
        covered = cols; // lowest column covered so far, from below
        for (int r = rows - 1; r >= 0; --r) {
            bump();
            if (const auto& iv = c.image(r)) {
                for (int u = std::min(iv->hi, covered - 1); u >= iv->lo; --u) {
                    last[static_cast<std::size_t>(u)] = r;
                    bump();
                }
                covered = std::min(covered, iv->lo);
            }
        }
    } else {
        int covered = cols; // intervals slide left going down
        for (int r = 0; r < rows; ++r) {
            bump();
            if (const auto& iv = c.image(r)) {
                for (int u = std::min(iv->hi, covered - 1); u >= iv->lo; --u) {
                    first[static_cast<std::size_t>(u)] = r;
                    bump();
                }
                covered = std::min(covered, iv->lo);
            }
        }
        covered = -1;
        for (int r = rows - 1; r >= 0; --r) {
            bump();
            if (const auto& iv = c.image(r)) {
                for (int u = std::max(iv->lo, covered + 1); u <= iv->hi; ++u) {
                    last[static_cast<std::size_t>(u)] = r;
                    bump();
                }
                covered = std::max(covered, iv->hi);
            }
        }
    }

    std::vector<std::optional<SupportInterval>> out(static_cast<std::size_t>(cols));
    for (int u = 0; u < cols; ++u) {
        if (first[static_cast<std::size_t>(u)] >= 0) {
            out[static_cast<std::size_t>(u)] =
                SupportInterval{first[static_cast<std::size_t>(u)], last[static_cast<std::size_t>(u)]};
        }
    }
    return RowConvexConstraint(c.colVar(), c.rowVar(), rows, std::move(out));
}

RowConvexConstraint intersect(const RowConvexConstraint& a, const RowConvexConstraint& b) {
    if (a.rowCount() != b.rowCount() || a.colCount() != b.colCount()) {
        throw DomainMismatchError("intersect: operands have different shapes");
    }
    commonShape(a, b, "intersect");
    std::vector<std::optional<SupportInterval>> out(static_cast<std::size_t>(a.rowCount()));
    for (int r = 0; r < a.rowCount(); ++r) {
        bump();
        const auto& ia = a.image(r);
        const auto& ib = b.image(r);
        if (!ia || !ib) {
            continue;
        }
        const int lo = std::max(ia->lo, ib->lo);
        const int hi = std::min(ia->hi, ib->hi);
        if (lo <= hi) {
            out[static_cast<std::size_t>(r)] = SupportInterval{lo, hi};
        }
    }
    return RowConvexConstraint(a.rowVar(), a.colVar(), a.colCount(), std::move(out));
}

RowConvexConstraint compose(const RowConvexConstraint& a, const RowConvexConstraint& b) {
    if (a.colCount() != b.rowCount()) {
        throw DomainMismatchError("compose: inner domains have different sizes");
    }
    const Shape shape = commonShape(a, b, "compose");
    const auto next = nextNonEmpty(b);
    const auto prev = prevNonEmpty(b);

    std::vector<std::optional<SupportInterval>> out(static_cast<std::size_t>(a.rowCount()));
    for (int r = 0; r < a.rowCount(); ++r) {
        bump();
        const auto& iv = a.image(r);
        if (!iv) {
            continue;
        }
        // Endpoint rows of b, skipping empty rows inward. Down staircase
        // images grow with the row, so the low end of the result comes
        // from the low end of [lo, hi]; up staircase is mirrored.
        const int loRow = next[static_cast<std::size_t>(iv->lo)];
        const int hiRow = prev[static_cast<std::size_t>(iv->hi)];
        if (loRow < 0 || hiRow < 0 || loRow > iv->hi || hiRow < iv->lo) {
            continue; // image rows of b are all empty
        }
        int lo;
        int hi;
        if (shape == Shape::Down) {
            lo = b.image(loRow)->lo;
            hi = b.image(hiRow)->hi;
        } else {
            lo = b.image(hiRow)->lo;
            hi = b.image(loRow)->hi;
        }
        out[static_cast<std::size_t>(r)] = SupportInterval{lo, hi};
    }
    return RowConvexConstraint(a.rowVar(), b.colVar(), b.colCount(), std::move(out));
}

} // namespace gscsp

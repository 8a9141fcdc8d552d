#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spclass {

struct GridCoord {
    int row = 0;
    int col = 0;
    bool operator==(const GridCoord&) const = default;
};

// Regular lattice with row-major canonical ordering (index = row*cols + col).
struct GridDomain {
    int rows = 0;
    int cols = 0;

    int n() const { return rows * cols; }
    int index(int r, int c) const { return r * cols + c; }
    GridCoord coord(int i) const { return {i / cols, i % cols}; }
    bool contains(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }

    std::vector<GridCoord> coords() const {
        std::vector<GridCoord> out;
        out.reserve(n());
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) out.push_back({r, c});
        return out;
    }
};

enum class NeighborOrder { first, second };  // rook / queen

struct NeighborhoodMatrix {
    Eigen::MatrixXd A;  // symmetric binary adjacency, zero diagonal
    Eigen::MatrixXd W;  // row-standardized; all-zero row where a site is isolated
    std::vector<int> isolated;

    int n() const { return static_cast<int>(A.rows()); }
};

// Adjacency between explicit lattice coordinates. first = edge-sharing (rook),
// second = edge or corner (queen). Sites absent from `coords` do not exist:
// boundary and hold-out-adjacent cells simply have fewer neighbors.
NeighborhoodMatrix build_grid_neighbors(const std::vector<GridCoord>& coords, NeighborOrder order);
NeighborhoodMatrix build_grid_neighbors(const GridDomain& domain, NeighborOrder order);

}  // namespace spclass

#include "spclass/grid.hpp"

#include <cstdlib>
#include <map>

#include "spclass/errors.hpp"

namespace spclass {

NeighborhoodMatrix build_grid_neighbors(const std::vector<GridCoord>& coords, NeighborOrder order) {
    const int n = static_cast<int>(coords.size());
    if (n == 0) throw validation_error("build_grid_neighbors: empty coordinate list");

    std::map<std::pair<int, int>, int> lookup;
    for (int i = 0; i < n; ++i) {
        auto key = std::make_pair(coords[i].row, coords[i].col);
        if (!lookup.emplace(key, i).second)
            throw validation_error("build_grid_neighbors: duplicate coordinate");
    }

    NeighborhoodMatrix nb;
    nb.A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int dr = -1; dr <= 1; ++dr) {
            for (int dc = -1; dc <= 1; ++dc) {
                if (dr == 0 && dc == 0) continue;
                if (order == NeighborOrder::first && std::abs(dr) + std::abs(dc) != 1) continue;
                auto it = lookup.find({coords[i].row + dr, coords[i].col + dc});
                if (it != lookup.end()) nb.A(i, it->second) = 1.0;
            }
        }
    }

    nb.W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double deg = nb.A.row(i).sum();
        if (deg > 0.0)
            nb.W.row(i) = nb.A.row(i) / deg;
        else
            nb.isolated.push_back(i);
    }
    return nb;
}

NeighborhoodMatrix build_grid_neighbors(const GridDomain& domain, NeighborOrder order) {
    if (domain.rows < 1 || domain.cols < 1)
        throw validation_error("build_grid_neighbors: grid dimensions must be positive");
    return build_grid_neighbors(domain.coords(), order);
}

}  // namespace spclass

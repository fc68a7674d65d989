#pragma once

#include <array>
#include <vector>

namespace crossflow {

enum class Axis { Horizontal, Vertical };

/// One directed single-lane roadway crossing the full grid.
/// Positions along a lane are measured in meters from its entry point,
/// increasing in the direction of travel.
struct Lane {
    int id = -1;
    Axis axis = Axis::Horizontal;
    int direction = +1;     // +1: increasing world coordinate, -1: decreasing
    int road_index = 0;     // row index for horizontal lanes, column index for vertical
    double length = 0.0;    // (cells crossed + 1) * lane_length
};

/// Crossing of a horizontal and a vertical lane. Perpendicular trajectories
/// meet in a single zero-extent point; positions are given in each lane's
/// own coordinate.
struct ConflictPoint {
    int id = -1;
    int lane_a = -1;        // horizontal lane
    int lane_b = -1;        // vertical lane
    double pos_on_a = 0.0;
    double pos_on_b = 0.0;
    int grid_row = 0;       // intersection this crossing belongs to
    int grid_col = 0;
};

/// Grid of unsignalized intersections. A rows x cols grid has one two-lane
/// road per row and per column, so 2*(rows+cols) lanes, and 4 conflict
/// points per intersection. Opposite-direction lanes of a road are
/// co-located (zero transverse offset); only perpendicular lanes conflict.
class RoadNetwork {
  public:
    RoadNetwork(int rows, int cols, double lane_length = 150.0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double lane_length() const { return lane_length_; }

    const std::vector<Lane>& lanes() const { return lanes_; }
    const Lane& lane(int id) const { return lanes_[static_cast<size_t>(id)]; }

    const std::vector<ConflictPoint>& conflict_points() const { return conflicts_; }
    const ConflictPoint& conflict_point(int id) const { return conflicts_[static_cast<size_t>(id)]; }

    /// Conflict point ids on `lane`, sorted by position along that lane.
    const std::vector<int>& conflicts_on(int lane) const;

    /// Conflict ids shared by the two lanes (empty if parallel).
    std::vector<int> conflicts_between(int lane_a, int lane_b) const;

    double conflict_pos_on(const ConflictPoint& cp, int lane) const;

    /// Intersection centers in world coordinates (x, y), row-major.
    const std::vector<std::array<double, 2>>& intersection_centers() const { return centers_; }

    /// Position of the intersection (row, col) center along `lane`,
    /// or a negative value if the lane does not pass through it.
    double center_pos_on_lane(int row, int col, int lane) const;

    /// World (x, y) of a point `s` meters along `lane`.
    std::array<double, 2> world_pos(int lane, double s) const;

    double extent_x() const { return (cols_ + 1) * lane_length_; }
    double extent_y() const { return (rows_ + 1) * lane_length_; }

  private:
    int rows_;
    int cols_;
    double lane_length_;
    std::vector<Lane> lanes_;
    std::vector<ConflictPoint> conflicts_;
    std::vector<std::vector<int>> conflicts_on_lane_;
    std::vector<std::array<double, 2>> centers_;
};

}  // namespace crossflow

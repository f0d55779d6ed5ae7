#pragma once

// Node placement for the single-hop covert link.
//
// Coordinates are in units of the Alice-Bob distance. Alice sits at (0,0),
// Bob at (1,0), and wardens are drawn from the unit box with corners
// (0,-0.5) and (1,0.5), so the midpoint warden is at (0.5,0). Friendly
// nodes form a homogeneous Poisson process, sampled on a finite square
// window that leaves at least `kMinWindowMargin` around the warden box.

#include <cstddef>
#include <span>
#include <vector>

#include "covert/random.hpp"

namespace covert {

struct Point2D {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(const Point2D& a, const Point2D& b) noexcept;
double squared_distance(const Point2D& a, const Point2D& b) noexcept;

inline constexpr Point2D kAlice{0.0, 0.0};
inline constexpr Point2D kBob{1.0, 0.0};
inline constexpr Point2D kMidpoint{0.5, 0.0};

/// Warden box [0,1] x [-0.5,0.5].
inline constexpr double kBoxMinX = 0.0;
inline constexpr double kBoxMaxX = 1.0;
inline constexpr double kBoxMinY = -0.5;
inline constexpr double kBoxMaxY = 0.5;

bool inside_warden_box(const Point2D& p) noexcept;

inline constexpr double kMinWindowMargin = 3.0;

/// Axis-aligned square window for the truncated Poisson process.
class PointProcessWindow {
public:
    /// Window centred on the warden box with the given margin (>= kMinWindowMargin).
    static PointProcessWindow around_warden_box(double margin = kMinWindowMargin);

    /// Validated construction; rejects non-finite or non-positive half widths
    /// and windows that leave less than kMinWindowMargin around the box.
    static PointProcessWindow make(Point2D center, double half_width);

    Point2D center() const noexcept { return center_; }
    double half_width() const noexcept { return half_width_; }
    double area() const noexcept { return 4.0 * half_width_ * half_width_; }

    /// Smallest distance from the warden box to the window boundary.
    double margin() const noexcept;

private:
    PointProcessWindow(Point2D center, double half_width) : center_(center), half_width_(half_width) {}

    Point2D center_;
    double half_width_;
};

/// Count ~ Poisson(density * area), positions i.i.d. uniform on the window.
std::vector<Point2D> sample_friendly_nodes(double density, const PointProcessWindow& window, Rng& rng);

/// `count` wardens, i.i.d. uniform on the warden box.
std::vector<Point2D> sample_wardens(std::size_t count, Rng& rng);

struct NearestNode {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Closest friendly node to `query`; ties go to the lowest index.
/// Throws NoJammerError when `friendly` is empty.
NearestNode nearest_friendly(std::span<const Point2D> friendly, const Point2D& query);

/// P(d_{r,w} <= x) = 1 - exp(-m*pi*x^2) for the nearest point of a
/// density-m plane Poisson process.
double nearest_distance_cdf(double density, double x);

/// E[d_{r,w}^gamma] = Gamma(gamma/2 + 1) / (m*pi)^(gamma/2).
double nearest_distance_moment(double density, double gamma);

struct NodeLayout {
    Point2D alice = kAlice;
    Point2D bob = kBob;
    std::vector<Point2D> wardens;
    std::vector<Point2D> friendly;
    /// nearest_jammer[k] is the friendly node switched on for warden k.
    std::vector<NearestNode> nearest_jammer;

    /// Deduplicated, sorted indices of the friendly nodes that are on.
    std::vector<std::size_t> active_jammers() const;
};

/// Assembles a layout and assigns each warden its nearest friendly node.
NodeLayout make_layout(std::vector<Point2D> wardens, std::vector<Point2D> friendly);

/// How wardens are placed in a sampled layout.
struct WardenPlacement {
    enum class Kind { midpoint, uniform };
    Kind kind = Kind::midpoint;
    std::size_t count = 1;

    static WardenPlacement midpoint() { return {Kind::midpoint, 1}; }
    static WardenPlacement uniform(std::size_t count) { return {Kind::uniform, count}; }
};

struct LayoutDraw {
    NodeLayout layout;
    /// Poisson draws discarded because they contained no friendly node.
    std::size_t resamples = 0;
};

/// Samples wardens and friendly nodes; empty friendly realizations are
/// redrawn (up to `max_resamples`, then NoJammerError).
LayoutDraw sample_layout(double density, const WardenPlacement& placement, const PointProcessWindow& window,
                         Rng& rng, std::size_t max_resamples = 1000);

}  // namespace covert

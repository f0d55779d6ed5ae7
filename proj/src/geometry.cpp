#include "covert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "covert/errors.hpp"

namespace covert {

double squared_distance(const Point2D& a, const Point2D& b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(const Point2D& a, const Point2D& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

bool inside_warden_box(const Point2D& p) noexcept {
    return p.x >= kBoxMinX && p.x <= kBoxMaxX && p.y >= kBoxMinY && p.y <= kBoxMaxY;
}

PointProcessWindow PointProcessWindow::around_warden_box(double margin) {
    return make(Point2D{0.5 * (kBoxMinX + kBoxMaxX), 0.5 * (kBoxMinY + kBoxMaxY)}, 0.5 + margin);
}

PointProcessWindow PointProcessWindow::make(Point2D center, double half_width) {
    detail::require(std::isfinite(center.x) && std::isfinite(center.y), "window center must be finite");
    detail::require(std::isfinite(half_width) && half_width > 0.0, "window half width must be positive and finite");
    PointProcessWindow window(center, half_width);
    // Small tolerance so around_warden_box(3.0) is accepted despite rounding.
    detail::require(window.margin() >= kMinWindowMargin - 1e-12,
                    "window must leave a margin of at least 3 around the warden box (got " +
                        std::to_string(window.margin()) + ")");
    return window;
}

double PointProcessWindow::margin() const noexcept {
    const double left = kBoxMinX - (center_.x - half_width_);
    const double right = (center_.x + half_width_) - kBoxMaxX;
    const double bottom = kBoxMinY - (center_.y - half_width_);
    const double top = (center_.y + half_width_) - kBoxMaxY;
    return std::min({left, right, bottom, top});
}

std::vector<Point2D> sample_friendly_nodes(double density, const PointProcessWindow& window, Rng& rng) {
    detail::require(std::isfinite(density) && density > 0.0, "friendly density must be positive");
    std::poisson_distribution<std::size_t> count_dist(density * window.area());
    const std::size_t count = count_dist(rng);

    const Point2D c = window.center();
    const double h = window.half_width();
    std::uniform_real_distribution<double> ux(c.x - h, c.x + h);
    std::uniform_real_distribution<double> uy(c.y - h, c.y + h);

    std::vector<Point2D> nodes;
    nodes.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        nodes.push_back({x, y});
    }
    return nodes;
}

std::vector<Point2D> sample_wardens(std::size_t count, Rng& rng) {
    detail::require(count >= 1, "warden count must be at least 1");
    std::uniform_real_distribution<double> ux(kBoxMinX, kBoxMaxX);
    std::uniform_real_distribution<double> uy(kBoxMinY, kBoxMaxY);
    std::vector<Point2D> wardens;
    wardens.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double x = ux(rng);
        const double y = uy(rng);
        wardens.push_back({x, y});
    }
    return wardens;
}

NearestNode nearest_friendly(std::span<const Point2D> friendly, const Point2D& query) {
    if (friendly.empty()) throw NoJammerError();
    std::size_t best = 0;
    double best_d2 = squared_distance(friendly[0], query);
    for (std::size_t i = 1; i < friendly.size(); ++i) {
        const double d2 = squared_distance(friendly[i], query);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return {best, distance(friendly[best], query)};
}

double nearest_distance_cdf(double density, double x) {
    detail::require(density > 0.0, "density must be positive");
    detail::require(x >= 0.0, "distance must be non-negative");
    return -std::expm1(-density * std::numbers::pi * x * x);
}

double nearest_distance_moment(double density, double gamma) {
    detail::require(density > 0.0, "density must be positive");
    detail::require(gamma > 0.0, "exponent must be positive");
    return std::tgamma(0.5 * gamma + 1.0) / std::pow(density * std::numbers::pi, 0.5 * gamma);
}

std::vector<std::size_t> NodeLayout::active_jammers() const {
    std::vector<std::size_t> active;
    active.reserve(nearest_jammer.size());
    for (const auto& nj : nearest_jammer) active.push_back(nj.index);
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    return active;
}

NodeLayout make_layout(std::vector<Point2D> wardens, std::vector<Point2D> friendly) {
    NodeLayout layout;
    layout.wardens = std::move(wardens);
    layout.friendly = std::move(friendly);
    layout.nearest_jammer.reserve(layout.wardens.size());
    for (const auto& w : layout.wardens) layout.nearest_jammer.push_back(nearest_friendly(layout.friendly, w));
    return layout;
}

LayoutDraw sample_layout(double density, const WardenPlacement& placement, const PointProcessWindow& window,
                         Rng& rng, std::size_t max_resamples) {
    std::vector<Point2D> wardens;
    if (placement.kind == WardenPlacement::Kind::midpoint) {
        detail::require(placement.count == 1, "midpoint placement holds exactly one warden");
        wardens.push_back(kMidpoint);
    } else {
        wardens = sample_wardens(placement.count, rng);
    }

    LayoutDraw draw;
    for (;;) {
        auto friendly = sample_friendly_nodes(density, window, rng);
        if (!friendly.empty()) {
            draw.layout = make_layout(std::move(wardens), std::move(friendly));
            return draw;
        }
        if (draw.resamples == max_resamples) throw NoJammerError();
        ++draw.resamples;
    }
}

}  // namespace covert

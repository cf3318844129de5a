#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "navsim/errors.hpp"
#include "navsim/harness.hpp"

namespace navsim {

namespace {

class Canvas {
  public:
    Canvas(const GridGeometry& g, int scale) : g_(g), scale_(scale), w_(g.width * scale), h_(g.height * scale)
    {
        pixels_.assign(static_cast<std::size_t>(w_) * static_cast<std::size_t>(h_) * 3, 0);
    }

    void put(int px, int py, const std::uint8_t rgb[3])
    {
        if (px < 0 || py < 0 || px >= w_ || py >= h_)
            return;
        const std::size_t i = (static_cast<std::size_t>(py) * static_cast<std::size_t>(w_) + static_cast<std::size_t>(px)) * 3;
        std::copy_n(rgb, 3, pixels_.begin() + static_cast<std::ptrdiff_t>(i));
    }

    // Image row 0 is the top of the map.
    std::pair<int, int> to_pixel(Point2D p) const
    {
        const double per_px = g_.resolution / scale_;
        const int px = static_cast<int>(std::floor((p.x - g_.origin.x) / per_px));
        const int py = h_ - 1 - static_cast<int>(std::floor((p.y - g_.origin.y) / per_px));
        return {px, py};
    }

    void line(Point2D a, Point2D b, const std::uint8_t rgb[3])
    {
        auto [x0, y0] = to_pixel(a);
        const auto [x1, y1] = to_pixel(b);
        const int dx = std::abs(x1 - x0);
        const int dy = -std::abs(y1 - y0);
        const int sx = x0 < x1 ? 1 : -1;
        const int sy = y0 < y1 ? 1 : -1;
        int err = dx + dy;
        while (true) {
            put(x0, y0, rgb);
            if (x0 == x1 && y0 == y1)
                break;
            const int e2 = 2 * err;
            if (e2 >= dy) {
                err += dy;
                x0 += sx;
            }
            if (e2 <= dx) {
                err += dx;
                y0 += sy;
            }
        }
    }

    void polyline(const std::vector<Point2D>& pts, const std::uint8_t rgb[3])
    {
        if (pts.size() == 1)
            line(pts[0], pts[0], rgb);
        for (std::size_t i = 1; i < pts.size(); ++i)
            line(pts[i - 1], pts[i], rgb);
    }

    void disc(Point2D c, double r, const std::uint8_t rgb[3])
    {
        const auto [lo_x, hi_y] = to_pixel({c.x - r, c.y - r});
        const auto [hi_x, lo_y] = to_pixel({c.x + r, c.y + r});
        const double per_px = g_.resolution / scale_;
        for (int py = lo_y; py <= hi_y; ++py) {
            for (int px = lo_x; px <= hi_x; ++px) {
                const double x = g_.origin.x + (px + 0.5) * per_px;
                const double y = g_.origin.y + (h_ - 1 - py + 0.5) * per_px;
                if (std::hypot(x - c.x, y - c.y) <= r)
                    put(px, py, rgb);
            }
        }
    }

    std::vector<std::uint8_t> ppm() const
    {
        const std::string header = "P6\n" + std::to_string(w_) + " " + std::to_string(h_) + "\n255\n";
        std::vector<std::uint8_t> out(header.begin(), header.end());
        out.insert(out.end(), pixels_.begin(), pixels_.end());
        return out;
    }

  private:
    GridGeometry g_;
    int scale_;
    int w_;
    int h_;
    std::vector<std::uint8_t> pixels_;
};

std::uint8_t grey_for(CellState s)
{
    switch (s) {
    case CellState::Free: return kPixelFree;
    case CellState::Occupied: return kPixelOccupied;
    case CellState::Unknown: break;
    }
    return kPixelUnknown;
}

}  // namespace

std::vector<std::uint8_t> render_ppm(const World& world, const Trace& trace, const RenderOptions& options)
{
    if (options.pixels_per_cell < 1)
        throw ContractError("render: pixels_per_cell must be >= 1");
    const OccupancyGrid& background = options.map ? *options.map : *world.static_grid;
    const GridGeometry& g = background.geometry();
    const int scale = options.pixels_per_cell;
    Canvas canvas(g, scale);
    for (int r = 0; r < g.height; ++r) {
        for (int c = 0; c < g.width; ++c) {
            const std::uint8_t v = grey_for(background.classify({c, r}));
            const std::uint8_t rgb[3] = {v, v, v};
            for (int dy = 0; dy < scale; ++dy)
                for (int dx = 0; dx < scale; ++dx)
                    canvas.put(c * scale + dx, (g.height - 1 - r) * scale + dy, rgb);
        }
    }

    if (options.path)
        canvas.polyline(*options.path, colors::kPath);

    std::vector<Point2D> truth, est;
    for (const auto& rec : trace) {
        truth.push_back(rec.pose.position());
        est.push_back(rec.estimate.position());
    }
    canvas.polyline(est, colors::kEstimate);
    canvas.polyline(truth, colors::kTruth);

    const double t_final = trace.empty() ? world.time : trace.back().t;
    for (const auto& ob : world.dynamic_obstacles)
        canvas.disc(ob.position_at(t_final), ob.radius, colors::kObstacle);
    return canvas.ppm();
}

void render(const World& world, const Trace& trace, const std::string& out_path, const RenderOptions& options)
{
    const auto bytes = render_ppm(world, trace, options);
    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw IoError(out_path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError(out_path, "write failed");
}

}  // namespace navsim

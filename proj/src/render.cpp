#include "rodsim/render.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rodsim/error.hpp"
#include "rodsim/metrics.hpp"

namespace rodsim {

namespace {

struct Rgb {
    int r, g, b;
};

// donors red, recipients sand, transconjugants green
Rgb role_color(int role) {
    switch (role) {
    case 0: return {200, 60, 50};
    case 2: return {60, 170, 70};
    default: return {190, 180, 120};
    }
}

Rgb brighten(Rgb c, double readout) {
    auto mix = [&](int base, int hi) {
        return static_cast<int>(base + (hi - base) * readout);
    };
    return {mix(c.r, 120), mix(c.g, 255), mix(c.b, 120)};
}

void fmt(std::ostringstream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    out << buf;
}

} // namespace

std::string render_svg(const SnapshotHeader& header, const SnapshotRecord& record,
                       const RenderOptions& opts) {
    const Rect& view = header.screenview;
    double s = opts.scale;
    double w = view.width() * s, h = view.height() * s;
    auto X = [&](double x) { return (x - view.x0) * s; };
    auto Y = [&](double y) { return (view.y1 - y) * s; }; // flip: world y up

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(w)
        << "\" height=\"" << static_cast<int>(h) << "\" viewBox=\"0 0 ";
    fmt(out, w);
    out << ' ';
    fmt(out, h);
    out << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#101418\"/>\n";

    for (const auto& wall : header.walls) {
        out << "<line x1=\"";
        fmt(out, X(wall.a.x));
        out << "\" y1=\"";
        fmt(out, Y(wall.a.y));
        out << "\" x2=\"";
        fmt(out, X(wall.b.x));
        out << "\" y2=\"";
        fmt(out, Y(wall.b.y));
        out << "\" stroke=\"#8a929a\" stroke-width=\"2\"/>\n";
    }

    for (const auto& c : record.cells) {
        double dx = std::cos(c.angle) * c.half_length;
        double dy = std::sin(c.angle) * c.half_length;
        Rgb col = role_color(c.role);
        if (c.readout > 0.0) col = brighten(col, c.readout);
        out << "<line x1=\"";
        fmt(out, X(c.cx - dx));
        out << "\" y1=\"";
        fmt(out, Y(c.cy - dy));
        out << "\" x2=\"";
        fmt(out, X(c.cx + dx));
        out << "\" y2=\"";
        fmt(out, Y(c.cy + dy));
        out << "\" stroke=\"rgb(" << col.r << ',' << col.g << ',' << col.b
            << ")\" stroke-width=\"";
        fmt(out, 2.0 * c.radius * s);
        out << "\" stroke-linecap=\"round\"/>\n";
    }

    // pilus links drawn centre to centre
    for (const auto& sp : record.springs) {
        const SnapshotCellRow *ga = nullptr, *rb = nullptr;
        for (const auto& c : record.cells) {
            if (c.id == sp.giver) ga = &c;
            if (c.id == sp.receiver) rb = &c;
        }
        if (!ga || !rb) continue;
        out << "<line x1=\"";
        fmt(out, X(ga->cx));
        out << "\" y1=\"";
        fmt(out, Y(ga->cy));
        out << "\" x2=\"";
        fmt(out, X(rb->cx));
        out << "\" y2=\"";
        fmt(out, Y(rb->cy));
        out << "\" stroke=\"#7de87d\" stroke-width=\"1.5\" stroke-dasharray=\"4 3\"/>\n";
    }

    if (opts.velocity_field && !record.cells.empty()) {
        auto field = metrics::vector_field(record, view, opts.field_bins_x, opts.field_bins_y);
        double arrow = 6.0; // pixels per unit speed
        for (const auto& f : field) {
            if (f.count == 0) continue;
            double x0 = X(f.cx), y0 = Y(f.cy);
            double x1 = x0 + f.vx * arrow * s, y1 = y0 - f.vy * arrow * s;
            out << "<line x1=\"";
            fmt(out, x0);
            out << "\" y1=\"";
            fmt(out, y0);
            out << "\" x2=\"";
            fmt(out, x1);
            out << "\" y2=\"";
            fmt(out, y1);
            out << "\" stroke=\"#58b8ff\" stroke-width=\"1\"/>\n<circle cx=\"";
            fmt(out, x1);
            out << "\" cy=\"";
            fmt(out, y1);
            out << "\" r=\"1.5\" fill=\"#58b8ff\"/>\n";
        }
    }

    out << "<text x=\"8\" y=\"16\" fill=\"#c8d0d8\" font-family=\"monospace\" font-size=\"12\">"
        << header.scenario << "  it " << record.iteration << "  t ";
    fmt(out, record.min);
    out << " min  cells " << record.cells.size() << "</text>\n</svg>\n";
    return out.str();
}

void write_frame_svg(const std::string& path, const SnapshotHeader& header,
                     const SnapshotRecord& record, const RenderOptions& opts) {
    std::ofstream out(path);
    if (!out) throw SimError::io("cannot open frame file: " + path);
    out << render_svg(header, record, opts);
    if (!out) throw SimError::io("frame write failed: " + path);
}

} // namespace rodsim

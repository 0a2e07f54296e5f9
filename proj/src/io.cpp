#include "pca/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pca {

void write_configuration_text(std::ostream& os, const Configuration& x) {
    os << x.geom.dim();
    for (auto L : x.geom.sides) os << ' ' << L;
    os << ' ' << x.alphabet.size << '\n';
    for (std::size_t i = 0; i < x.cells.size(); ++i)
        os << static_cast<int>(x.cells[i])
           << ((i + 1) % static_cast<std::size_t>(x.geom.sides.back()) ? ' ' : '\n');
}

Configuration read_configuration_text(std::istream& is) {
    int d = 0;
    if (!(is >> d) || d < 1) throw std::runtime_error("bad configuration header");
    Geometry g;
    g.sides.resize(d);
    for (int i = 0; i < d; ++i)
        if (!(is >> g.sides[i]) || g.sides[i] < 1)
            throw std::runtime_error("bad side length");
    int S = 0;
    if (!(is >> S) || S < 1) throw std::runtime_error("bad alphabet size");
    Configuration x;
    x.alphabet = S == 2 ? Alphabet::binary() : Alphabet::plain(S);
    x.geom = g;
    x.cells.resize(g.cell_count());
    for (std::size_t i = 0; i < x.cells.size(); ++i) {
        int v = -1;
        if (!(is >> v) || v < 0 || v >= S)
            throw std::runtime_error("bad or missing symbol at cell " +
                                     std::to_string(i));
        x.cells[i] = static_cast<std::uint8_t>(v);
    }
    return x;
}

void write_rule_text(std::ostream& os, const LocalRule& f) {
    os << f.alphabet.size << ' ' << f.nbhd.dim << ' ' << f.nbhd.size() << '\n';
    for (const Coord& o : f.nbhd.offsets) {
        for (std::size_t i = 0; i < o.size(); ++i) os << (i ? " " : "") << o[i];
        os << '\n';
    }
    for (std::size_t i = 0; i < f.table.size(); ++i)
        os << static_cast<int>(f.table[i]) << (i + 1 < f.table.size() ? ' ' : '\n');
}

LocalRule read_rule_text(std::istream& is) {
    int S = 0, d = 0;
    std::size_t m = 0;
    if (!(is >> S >> d >> m) || S < 1 || d < 1 || m < 1)
        throw std::runtime_error("bad rule header");
    std::vector<Coord> offsets(m, Coord(d));
    for (std::size_t j = 0; j < m; ++j)
        for (int i = 0; i < d; ++i)
            if (!(is >> offsets[j][i])) throw std::runtime_error("bad offset");
    LocalRule f;
    f.alphabet = S == 2 ? Alphabet::binary() : Alphabet::plain(S);
    f.nbhd = Neighborhood::of(d, std::move(offsets));
    std::size_t expect = 1;
    for (std::size_t i = 0; i < m; ++i) expect *= static_cast<std::size_t>(S);
    f.table.resize(expect);
    for (std::size_t i = 0; i < expect; ++i) {
        int v = -1;
        if (!(is >> v) || v < 0 || v >= S)
            throw std::runtime_error("rule table: expected " + std::to_string(expect) +
                                     " entries, bad or missing entry " +
                                     std::to_string(i));
        f.table[i] = static_cast<std::uint8_t>(v);
    }
    return f;
}

namespace {

void write_pgm_raster(const std::string& path, std::size_t w, std::size_t h,
                      const std::vector<std::uint8_t>& gray) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "P5\n" << w << ' ' << h << "\n255\n";
    os.write(reinterpret_cast<const char*>(gray.data()),
             static_cast<std::streamsize>(gray.size()));
}

std::uint8_t gray_of(int sym, int S) {
    return S > 1 ? static_cast<std::uint8_t>(sym * 255 / (S - 1)) : 0;
}

}  // namespace

void write_pgm(const std::string& path, const Configuration& x) {
    if (x.geom.dim() > 2) throw std::invalid_argument("PGM export is 1D/2D only");
    std::size_t h = x.geom.dim() == 2 ? static_cast<std::size_t>(x.geom.sides[0]) : 1;
    std::size_t w = static_cast<std::size_t>(x.geom.sides.back());
    std::vector<std::uint8_t> gray(x.cells.size());
    for (std::size_t i = 0; i < x.cells.size(); ++i)
        gray[i] = gray_of(x.cells[i], x.alphabet.size);
    write_pgm_raster(path, w, h, gray);
}

void write_space_time_pgm(const std::string& path,
                          const std::vector<Configuration>& frames) {
    if (frames.empty()) throw std::invalid_argument("no frames");
    if (frames.front().geom.dim() != 1)
        throw std::invalid_argument("space-time export needs 1D frames");
    std::size_t w = frames.front().cells.size();
    std::vector<std::uint8_t> gray;
    gray.reserve(w * frames.size());
    for (const Configuration& x : frames) {
        if (x.cells.size() != w) throw std::invalid_argument("frame size mismatch");
        for (std::uint8_t c : x.cells) gray.push_back(gray_of(c, x.alphabet.size));
    }
    write_pgm_raster(path, w, frames.size(), gray);
}

void write_curve_csv(const std::string& path, const DecayCurve& c) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    bool env = !c.envelope.empty();
    os << "t,value,stderr" << (env ? ",envelope" : "") << '\n';
    os.precision(17);
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        os << c.times[i] << ',' << c.values[i] << ',' << c.stderrs[i];
        if (env) os << ',' << c.envelope[i];
        os << '\n';
    }
}

}  // namespace pca

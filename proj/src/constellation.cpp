#include "constellation.hpp"

#include "errors.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bicm {

namespace {

constexpr double pi = 3.14159265358979323846;

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int int_log2(int v) {
    int m = 0;
    while ((1 << m) < v) ++m;
    return m;
}

void check_unit_energy(const Constellation& c) {
    if (std::abs(c.average_energy() - 1.0) > 1e-12)
        throw std::invalid_argument("constellation not normalized to unit average energy");
}

} // namespace

double Constellation::average_energy() const {
    double e = 0.0;
    for (const auto& p : points) e += std::norm(p);
    return e / static_cast<double>(points.size());
}

std::uint64_t Constellation::content_hash() const {
    // FNV-1a over the point bit patterns; used as an engine cache key.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(m));
    for (const auto& p : points) {
        std::uint64_t re, im;
        double d = p.real();
        std::memcpy(&re, &d, 8);
        d = p.imag();
        std::memcpy(&im, &d, 8);
        mix(re);
        mix(im);
    }
    return h;
}

Labeling::Labeling(int m, std::vector<std::int32_t> point_of_label)
    : m_(m), point_of_label_(std::move(point_of_label)) {
    if (m_ < 1 || m_ > 16) throw std::invalid_argument("labeling: m out of range");
    const int M = 1 << m_;
    if (static_cast<int>(point_of_label_.size()) != M)
        throw std::invalid_argument("labeling: expected 2^m entries");
    label_of_point_.assign(M, -1);
    for (int label = 0; label < M; ++label) {
        const int p = point_of_label_[label];
        if (p < 0 || p >= M || label_of_point_[p] != -1)
            throw std::invalid_argument("labeling: map is not a bijection");
        label_of_point_[p] = label;
    }
    subsets_.resize(2 * static_cast<std::size_t>(m_));
    for (int j = 1; j <= m_; ++j)
        for (int b = 0; b < 2; ++b) {
            auto& s = subsets_[(j - 1) * 2 + b];
            for (int p = 0; p < M; ++p)
                if (bit_of_point(p, j) == b) s.push_back(p);
        }
}

const std::vector<std::int32_t>& Labeling::subset(int j, int b) const {
    if (j < 1 || j > m_) throw std::invalid_argument("subset: bit position out of range");
    if (b != 0 && b != 1) throw std::invalid_argument("subset: bit value must be 0 or 1");
    return subsets_[(j - 1) * 2 + b];
}

Constellation build_psk(int M) {
    if (!is_power_of_two(M) || M < 2)
        throw std::invalid_argument("build_psk: M must be a power of two >= 2");
    Constellation c;
    c.name = (M == 2) ? "bpsk" : "psk" + std::to_string(M);
    c.m = int_log2(M);
    c.geometry = Geometry::psk;
    c.points.reserve(M);
    for (int k = 0; k < M; ++k)
        c.points.emplace_back(std::cos(2.0 * pi * k / M), std::sin(2.0 * pi * k / M));
    // Clean up the representation of the cardinal points (cos(pi) etc.).
    for (auto& p : c.points) {
        if (std::abs(p.real()) < 1e-15) p = {0.0, p.imag()};
        if (std::abs(p.imag()) < 1e-15) p = {p.real(), 0.0};
    }
    check_unit_energy(c);
    return c;
}

Constellation build_qam(int M) {
    if (!is_power_of_two(M))
        throw std::invalid_argument("build_qam: M must be a power of two");
    const int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(M))));
    if (L * L != M)
        throw std::invalid_argument("build_qam: M must be a perfect square");
    Constellation c;
    c.name = (M == 4) ? "qpsk" : "qam" + std::to_string(M);
    c.m = int_log2(M);
    c.geometry = Geometry::qam_square;
    // Per-axis amplitudes {..,-3,-1,1,3,..}; mean energy 2(L^2-1)/3.
    const double scale = 1.0 / std::sqrt(2.0 * (L * L - 1) / 3.0);
    c.points.reserve(M);
    for (int i = 0; i < L; ++i)
        for (int q = 0; q < L; ++q)
            c.points.emplace_back(scale * (2 * i - (L - 1)), scale * (2 * q - (L - 1)));
    check_unit_energy(c);
    return c;
}

Labeling brgc(const Constellation& c) {
    if (c.m < 1) throw std::invalid_argument("brgc: m must be >= 1");
    const int M = c.size();
    std::vector<std::int32_t> point_of_label(M);
    switch (c.geometry) {
        case Geometry::psk:
            // Ring position k carries label gray(k).
            for (int label = 0; label < M; ++label)
                point_of_label[label] = static_cast<std::int32_t>(gray_decode(label));
            break;
        case Geometry::qam_square: {
            // Product of two reflected Gray codes; I-axis bits first.
            const int mh = c.m / 2;
            if (2 * mh != c.m) throw std::invalid_argument("brgc: square QAM needs even m");
            const int L = 1 << mh;
            for (int label = 0; label < M; ++label) {
                const unsigned gi = static_cast<unsigned>(label) >> mh;
                const unsigned gq = static_cast<unsigned>(label) & (L - 1);
                point_of_label[label] =
                    static_cast<std::int32_t>(gray_decode(gi) * L + gray_decode(gq));
            }
            break;
        }
        case Geometry::custom:
            throw std::invalid_argument("brgc: custom constellations carry their own labeling");
    }
    return Labeling(c.m, std::move(point_of_label));
}

const std::vector<std::int32_t>& subset(const Constellation& c, const Labeling& l, int j, int b) {
    if (l.bits() != c.m) throw std::invalid_argument("subset: labeling does not match constellation");
    return l.subset(j, b);
}

unsigned gray_decode(unsigned g) {
    unsigned k = g;
    for (unsigned shift = 1; shift < 32; shift <<= 1) k ^= k >> shift;
    return k;
}

LoadedConstellation load_constellation(std::istream& in, const std::string& name) {
    std::vector<std::string> labels;
    std::vector<cplx> points;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        const auto start = trimmed.find_first_not_of(" \t\r");
        if (start == std::string::npos) continue;
        if (trimmed[start] == '#') continue;
        std::istringstream fields(trimmed);
        std::string bits;
        double re, im;
        if (!(fields >> bits >> re >> im))
            throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                        ": expected `<bitstring> <re> <im>`");
        labels.push_back(bits);
        points.emplace_back(re, im);
    }
    if (labels.empty()) throw std::invalid_argument(name + ": no symbols found");
    const int m = static_cast<int>(labels.front().size());
    const int M = 1 << m;
    if (static_cast<int>(labels.size()) != M)
        throw std::invalid_argument(name + ": expected 2^m lines for m=" + std::to_string(m));

    std::vector<std::int32_t> point_of_label(M, -1);
    for (int p = 0; p < M; ++p) {
        const std::string& bits = labels[p];
        if (static_cast<int>(bits.size()) != m)
            throw std::invalid_argument(name + ": inconsistent label width");
        int label = 0;
        for (char ch : bits) {
            if (ch != '0' && ch != '1')
                throw std::invalid_argument(name + ": label must be a bitstring");
            label = (label << 1) | (ch - '0');
        }
        if (point_of_label[label] != -1)
            throw std::invalid_argument(name + ": duplicate label " + bits);
        point_of_label[label] = p;
    }

    std::set<std::pair<double, double>> distinct;
    for (const auto& p : points) distinct.emplace(p.real(), p.imag());
    if (static_cast<int>(distinct.size()) != M)
        throw std::invalid_argument(name + ": points must be distinct");

    LoadedConstellation out{Constellation{}, Labeling(m, std::move(point_of_label)), 1.0};
    out.constellation.name = name;
    out.constellation.m = m;
    out.constellation.geometry = Geometry::custom;
    out.constellation.points = std::move(points);
    const double energy = out.constellation.average_energy();
    if (energy <= 0.0) throw std::invalid_argument(name + ": degenerate constellation");
    out.scale = 1.0 / std::sqrt(energy);
    for (auto& p : out.constellation.points) p *= out.scale;
    return out;
}

LoadedConstellation load_constellation_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open constellation file: " + path);
    return load_constellation(in, path);
}

} // namespace bicm

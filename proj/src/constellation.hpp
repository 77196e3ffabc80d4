// Signal sets, binary labelings and label-subset queries.
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bicm {

using cplx = std::complex<double>;

enum class Geometry { psk, qam_square, custom };

// Complex signal set with unit average energy. `m` bits index the 2^m points.
struct Constellation {
    std::string name;
    int m = 0;
    Geometry geometry = Geometry::custom;
    std::vector<cplx> points;

    int size() const { return static_cast<int>(points.size()); }
    double average_energy() const;
    std::uint64_t content_hash() const;
};

// Bijection between m-bit labels and point indices. Bit positions are
// 1-based, j=1 being the most significant (leftmost) bit of the label.
class Labeling {
public:
    Labeling(int m, std::vector<std::int32_t> point_of_label);

    int bits() const { return m_; }
    int point_of_label(int label) const { return point_of_label_[label]; }
    int label_of_point(int point) const { return label_of_point_[point]; }
    int bit_of_point(int point, int j) const {
        return (label_of_point_[point] >> (m_ - j)) & 1;
    }
    // X_b^j: indices of points whose label has value b in position j.
    const std::vector<std::int32_t>& subset(int j, int b) const;

private:
    int m_;
    std::vector<std::int32_t> point_of_label_;
    std::vector<std::int32_t> label_of_point_;
    std::vector<std::vector<std::int32_t>> subsets_; // (j-1)*2+b
};

// M-ary PSK, points exp(i*2*pi*k/M) in ring order. M must be a power of two.
Constellation build_psk(int M);

// Square M-QAM on the {+-1,+-3,...}^2 grid, scaled to unit average energy.
// M must be a power of two with an integer square root.
Constellation build_qam(int M);

// Binary reflected Gray labeling matched to the constellation geometry:
// ring Gray for PSK, per-axis product Gray for square QAM (I bits first).
Labeling brgc(const Constellation& c);

// subset(c, l, j, b) with argument validation against the constellation.
const std::vector<std::int32_t>& subset(const Constellation& c, const Labeling& l, int j, int b);

struct LoadedConstellation {
    Constellation constellation;
    Labeling labeling;
    double scale = 1.0; // factor applied to reach unit average energy
};

// Text format, one line per symbol: `<bitstring> <re> <im>`.
LoadedConstellation load_constellation(std::istream& in, const std::string& name);
LoadedConstellation load_constellation_file(const std::string& path);

inline unsigned gray_code(unsigned k) { return k ^ (k >> 1); }
unsigned gray_decode(unsigned g);

} // namespace bicm

#pragma once

// Uniform periodic grid on the circle R/2piZ and the sampled fields living
// on it.  Matrix-valued fields use a channel (structure-of-arrays) layout so
// transforms and stencils run on contiguous doubles.

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "hsflow/errors.hpp"
#include "hsflow/mat3.hpp"

namespace hsflow {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct CircleGrid {
    int n = 0;
    double h = 0;

    CircleGrid() = default;
    explicit CircleGrid(int nodes) : n(nodes), h(two_pi / nodes) {
        if (nodes < 8 || nodes % 2 != 0)
            throw Error("CircleGrid: node count must be even and >= 8");
    }

    double node(int k) const { return h * k; }
    bool operator==(const CircleGrid& o) const { return n == o.n; }
    bool operator!=(const CircleGrid& o) const { return n != o.n; }
};

inline void require_same_grid(const CircleGrid& a, const CircleGrid& b) {
    if (a != b) throw GridMismatch("fields live on different grids");
}

struct ScalarField {
    CircleGrid grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const CircleGrid& g) : grid(g), v(g.n, 0.0) {}

    double& operator[](int k) { return v[k]; }
    double operator[](int k) const { return v[k]; }
    int size() const { return grid.n; }

    double min() const {
        double r = v[0];
        for (double e : v) r = std::fmin(r, e);
        return r;
    }
    double max_abs() const {
        double r = 0;
        for (double e : v) r = std::fmax(r, std::fabs(e));
        return r;
    }
    bool finite() const {
        for (double e : v)
            if (!std::isfinite(e)) return false;
        return true;
    }

    template <class F>
    static ScalarField sample(const CircleGrid& g, F&& f) {
        ScalarField s(g);
        for (int k = 0; k < g.n; ++k) s.v[k] = f(g.node(k));
        return s;
    }
};

template <class Value, int Channels>
struct ChannelField {
    CircleGrid grid;
    std::array<std::vector<double>, Channels> c;

    ChannelField() = default;
    explicit ChannelField(const CircleGrid& g) : grid(g) {
        for (auto& ch : c) ch.assign(g.n, 0.0);
    }

    int size() const { return grid.n; }

    bool finite() const {
        for (const auto& ch : c)
            for (double e : ch)
                if (!std::isfinite(e)) return false;
        return true;
    }

    double max_abs() const {
        double r = 0;
        for (const auto& ch : c)
            for (double e : ch) r = std::fmax(r, std::fabs(e));
        return r;
    }
};

struct Vec3Field : ChannelField<Vec3, 3> {
    using ChannelField::ChannelField;

    Vec3 at(int k) const { return {c[0][k], c[1][k], c[2][k]}; }
    void set(int k, const Vec3& g) {
        c[0][k] = g.x;
        c[1][k] = g.y;
        c[2][k] = g.z;
    }
};

struct SymMat3Field : ChannelField<SymMat3, 6> {
    using ChannelField::ChannelField;

    SymMat3 at(int k) const {
        return {c[0][k], c[1][k], c[2][k], c[3][k], c[4][k], c[5][k]};
    }
    void set(int k, const SymMat3& s) {
        for (int j = 0; j < 6; ++j) c[j][k] = s[j];
    }

    template <class F>
    static SymMat3Field sample(const CircleGrid& g, F&& f) {
        SymMat3Field s(g);
        for (int k = 0; k < g.n; ++k) s.set(k, f(g.node(k)));
        return s;
    }
};

struct Mat3Field : ChannelField<Mat3, 9> {
    using ChannelField::ChannelField;

    Mat3 at(int k) const {
        Mat3 a;
        for (int j = 0; j < 9; ++j) a.m[j] = c[j][k];
        return a;
    }
    void set(int k, const Mat3& a) {
        for (int j = 0; j < 9; ++j) c[j][k] = a.m[j];
    }

    template <class F>
    static Mat3Field sample(const CircleGrid& g, F&& f) {
        Mat3Field s(g);
        for (int k = 0; k < g.n; ++k) s.set(k, f(g.node(k)));
        return s;
    }
};

inline Mat3Field widen(const SymMat3Field& s) {
    Mat3Field a(s.grid);
    for (int k = 0; k < s.grid.n; ++k) a.set(k, s.at(k).full());
    return a;
}

inline SymMat3Field sym_part(const Mat3Field& a) {
    SymMat3Field s(a.grid);
    for (int k = 0; k < a.grid.n; ++k) s.set(k, sym_part(a.at(k)));
    return s;
}

inline Vec3Field skew_vec(const Mat3Field& a) {
    Vec3Field g(a.grid);
    for (int k = 0; k < a.grid.n; ++k) g.set(k, skew_vec(a.at(k)));
    return g;
}

inline Mat3Field assemble(const SymMat3Field& b, const Vec3Field& g) {
    require_same_grid(b.grid, g.grid);
    Mat3Field a(b.grid);
    for (int k = 0; k < b.grid.n; ++k) a.set(k, assemble(b.at(k), g.at(k)));
    return a;
}

}  // namespace hsflow

// Brute-force reference: the walk operators as explicit dense matrices built
// straight from their action on basis tuples.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

struct Dense {
    std::size_t n = 0;
    std::vector<Complex> a;

    explicit Dense(std::size_t size) : n(size), a(size * size) {}
    Complex& at(std::size_t r, std::size_t c) { return a[r * n + c]; }
    Complex at(std::size_t r, std::size_t c) const { return a[r * n + c]; }

    static Dense identity(std::size_t size) {
        Dense d(size);
        for (std::size_t i = 0; i < size; ++i) d.at(i, i) = 1.0;
        return d;
    }

    Dense operator*(const Dense& o) const {
        Dense out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const Complex v = at(i, k);
                if (v == Complex{}) continue;
                for (std::size_t j = 0; j < n; ++j) out.at(i, j) += v * o.at(k, j);
            }
        return out;
    }

    std::vector<Complex> apply(const std::vector<Complex>& v) const {
        std::vector<Complex> out(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out[i] += at(i, j) * v[j];
        return out;
    }
};

// Tuple (x, c_0 .. c_{k-1}) written out explicitly, c_0 first.
struct Tuple {
    int x;
    std::vector<int> c;
};

inline std::size_t index_of(const Tuple& t, int kappa) {
    std::size_t coins = 0;
    for (int j = 0; j < kappa; ++j) coins = coins * 2 + static_cast<std::size_t>(t.c[j]);
    return static_cast<std::size_t>(t.x) * (std::size_t{1} << kappa) + coins;
}

inline std::vector<Tuple> all_tuples(int P, int kappa) {
    std::vector<Tuple> out;
    for (int x = 0; x < P; ++x)
        for (int bits = 0; bits < (1 << kappa); ++bits) {
            Tuple t{x, std::vector<int>(kappa)};
            for (int j = 0; j < kappa; ++j) t.c[j] = (bits >> (kappa - 1 - j)) & 1;
            out.push_back(t);
        }
    return out;
}

// coin[r][c] row-major.
inline Dense coin_matrix(int P, int kappa, const Complex coin[4]) {
    Dense d(static_cast<std::size_t>(P) << kappa);
    for (const auto& t : all_tuples(P, kappa)) {
        const int a = t.c[kappa - 1];
        for (int out = 0; out < 2; ++out) {
            Tuple u = t;
            u.c[kappa - 1] = out;
            d.at(index_of(u, kappa), index_of(t, kappa)) += coin[out * 2 + a];
        }
    }
    return d;
}

inline Dense shift_matrix(int P, int kappa) {
    Dense d(static_cast<std::size_t>(P) << kappa);
    for (const auto& t : all_tuples(P, kappa)) {
        Tuple u = t;
        const int step = t.c[kappa - 1] == 0 ? 1 : -1;
        u.x = ((t.x + step) % P + P) % P;
        d.at(index_of(u, kappa), index_of(t, kappa)) = 1.0;
    }
    return d;
}

inline Dense memory_matrix(int P, int kappa) {
    Dense d(static_cast<std::size_t>(P) << kappa);
    for (const auto& t : all_tuples(P, kappa)) {
        Tuple u = t;
        u.c[0] = t.c[kappa - 1];
        for (int j = 1; j < kappa; ++j) u.c[j] = t.c[j - 1];
        d.at(index_of(u, kappa), index_of(t, kappa)) = 1.0;
    }
    return d;
}

inline Dense walk_matrix(int P, int kappa, const Complex coin[4]) {
    return memory_matrix(P, kappa) * shift_matrix(P, kappa) * coin_matrix(P, kappa, coin);
}

}  // namespace oracle

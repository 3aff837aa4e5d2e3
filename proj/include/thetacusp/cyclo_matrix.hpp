// Small dense matrices over Cyclo.
#pragma once

#include "thetacusp/cyclotomic.hpp"

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace thetacusp {

class CycloMatrix {
public:
    CycloMatrix() = default;
    CycloMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}

    static CycloMatrix identity(std::size_t n)
    {
        CycloMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = Cyclo(1);
        return m;
    }

    static CycloMatrix diagonal(const std::vector<Cyclo>& d)
    {
        CycloMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }

    Cyclo& operator()(std::size_t i, std::size_t j) { return a_.at(i * c_ + j); }
    const Cyclo& operator()(std::size_t i, std::size_t j) const { return a_.at(i * c_ + j); }

    CycloMatrix conj_transpose() const
    {
        CycloMatrix t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                t(j, i) = (*this)(i, j).conj();
        return t;
    }

    CycloMatrix inverse() const
    {
        if (r_ != c_)
            throw std::domain_error("inverse of a non-square matrix");
        std::size_t n = r_;
        CycloMatrix a = *this, inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            while (piv < n && a(piv, col).is_zero())
                ++piv;
            if (piv == n)
                throw std::domain_error("singular matrix");
            if (piv != col)
                for (std::size_t k = 0; k < n; ++k) {
                    std::swap(a(piv, k), a(col, k));
                    std::swap(inv(piv, k), inv(col, k));
                }
            Cyclo s = a(col, col).inverse();
            for (std::size_t k = 0; k < n; ++k) {
                a(col, k) *= s;
                inv(col, k) *= s;
            }
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col || a(r, col).is_zero())
                    continue;
                Cyclo f = a(r, col);
                for (std::size_t k = 0; k < n; ++k) {
                    if (!a(col, k).is_zero())
                        a(r, k) -= f * a(col, k);
                    if (!inv(col, k).is_zero())
                        inv(r, k) -= f * inv(col, k);
                }
            }
        }
        return inv;
    }

    CycloMatrix& operator*=(const Cyclo& s)
    {
        for (auto& x : a_)
            x *= s;
        return *this;
    }

    friend CycloMatrix operator*(const CycloMatrix& x, const CycloMatrix& y)
    {
        if (x.c_ != y.r_)
            throw std::domain_error("matrix shape mismatch");
        CycloMatrix z(x.r_, y.c_);
        for (std::size_t i = 0; i < x.r_; ++i)
            for (std::size_t k = 0; k < x.c_; ++k) {
                const Cyclo& xik = x(i, k);
                if (xik.is_zero())
                    continue;
                for (std::size_t j = 0; j < y.c_; ++j)
                    if (!y(k, j).is_zero())
                        z(i, j) += xik * y(k, j);
            }
        return z;
    }

    friend CycloMatrix operator*(const Cyclo& s, CycloMatrix m) { return m *= s; }

    friend bool operator==(const CycloMatrix& x, const CycloMatrix& y)
    {
        return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_;
    }

    std::vector<std::vector<std::complex<double>>> embed() const
    {
        std::vector<std::vector<std::complex<double>>> out(r_, std::vector<std::complex<double>>(c_));
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j)
                out[i][j] = (*this)(i, j).embed();
        return out;
    }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<Cyclo> a_;
};

}  // namespace thetacusp

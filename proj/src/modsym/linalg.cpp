#include "imt/modsym/linalg.hpp"

#include <stdexcept>

namespace imt::la {

Mat Mat::identity(int n) {
    Mat I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, int cols) {
    Mat A(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < A.rows(); ++i) A.set_row(i, rows[i]);
    return A;
}

Vec Mat::row(int i) const {
    return Vec(a_.begin() + static_cast<long>(i) * c_, a_.begin() + static_cast<long>(i + 1) * c_);
}

void Mat::set_row(int i, const Vec& v) {
    if (static_cast<int>(v.size()) != c_) throw std::invalid_argument("set_row: length mismatch");
    for (int j = 0; j < c_; ++j) (*this)(i, j) = v[j];
}

bool Mat::is_zero() const {
    for (auto& x : a_)
        if (x != 0) return false;
    return true;
}

Mat operator*(const Mat& A, const Mat& B) {
    if (A.cols() != B.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    Mat C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            const Q& a = A(i, k);
            if (a == 0) continue;
            for (int j = 0; j < B.cols(); ++j)
                if (B(k, j) != 0) C(i, j) += a * B(k, j);
        }
    return C;
}

Mat operator+(const Mat& A, const Mat& B) {
    Mat C = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C(i, j) += B(i, j);
    return C;
}

Mat operator-(const Mat& A, const Mat& B) {
    Mat C = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C(i, j) -= B(i, j);
    return C;
}

Mat scale(const Mat& A, const Q& s) {
    Mat C = A;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) C(i, j) *= s;
    return C;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

Vec vec_mat(const Vec& v, const Mat& A) {
    Vec r(A.cols(), 0);
    for (int i = 0; i < A.rows(); ++i) {
        if (v[i] == 0) continue;
        for (int j = 0; j < A.cols(); ++j)
            if (A(i, j) != 0) r[j] += v[i] * A(i, j);
    }
    return r;
}

Vec mat_vec(const Mat& A, const Vec& v) {
    Vec r(A.rows(), 0);
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (v[j] != 0 && A(i, j) != 0) r[i] += A(i, j) * v[j];
    return r;
}

Q dot(const Vec& a, const Vec& b) {
    Q s = 0;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v) {
    for (auto& x : v)
        if (x != 0) return false;
    return true;
}

Echelon rref(Mat A) {
    const int m = A.rows(), n = A.cols();
    std::vector<int> piv;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int best = -1;
        // prefer the shortest nonzero entry to limit growth
        size_t best_size = 0;
        for (int i = r; i < m; ++i) {
            if (A(i, c) == 0) continue;
            size_t sz = mpz_sizeinbase(A(i, c).get_num_mpz_t(), 2) + mpz_sizeinbase(A(i, c).get_den_mpz_t(), 2);
            if (best < 0 || sz < best_size) {
                best = i;
                best_size = sz;
            }
        }
        if (best < 0) continue;
        if (best != r)
            for (int j = 0; j < n; ++j) std::swap(A(r, j), A(best, j));
        Q inv = 1 / A(r, c);
        for (int j = c; j < n; ++j) A(r, j) *= inv;
        for (int i = 0; i < m; ++i) {
            if (i == r || A(i, c) == 0) continue;
            Q f = A(i, c);
            for (int j = c; j < n; ++j)
                if (A(r, j) != 0) A(i, j) -= f * A(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    Mat R(r, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) R(i, j) = A(i, j);
    return {R, piv};
}

int rank(const Mat& A) { return static_cast<int>(rref(A).pivots.size()); }

std::vector<Vec> right_kernel(const Mat& A) {
    auto [R, piv] = rref(A);
    const int n = A.cols();
    std::vector<bool> is_piv(n, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<Vec> out;
    for (int f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        Vec v(n, 0);
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -R(static_cast<int>(i), f);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Vec> left_kernel(const Mat& A) { return right_kernel(transpose(A)); }

Vec coordinates(const std::vector<Vec>& basis, const Vec& v) {
    // solve c * B = v
    const int r = static_cast<int>(basis.size());
    const int n = static_cast<int>(v.size());
    Mat aug(n, r + 1);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) aug(i, j) = basis[j][i];
    for (int i = 0; i < n; ++i) aug(i, r) = v[i];
    auto [R, piv] = rref(aug);
    if (!piv.empty() && piv.back() == r) throw std::domain_error("coordinates: vector not in span");
    Vec c(r, 0);
    for (size_t i = 0; i < piv.size(); ++i) c[piv[i]] = R(static_cast<int>(i), r);
    return c;
}

Mat restrict_to(const Mat& A, const std::vector<Vec>& basis) {
    const int r = static_cast<int>(basis.size());
    const int n = A.rows();
    // solve for all images at once
    Mat aug(n, r + r);
    for (int j = 0; j < r; ++j)
        for (int i = 0; i < n; ++i) aug(i, j) = basis[j][i];
    for (int j = 0; j < r; ++j) {
        Vec img = vec_mat(basis[j], A);
        for (int i = 0; i < n; ++i) aug(i, r + j) = img[i];
    }
    auto [R, piv] = rref(aug);
    for (int c : piv)
        if (c >= r) throw std::domain_error("restrict_to: subspace not invariant");
    Mat out(r, r);
    for (int j = 0; j < r; ++j)
        for (size_t i = 0; i < piv.size(); ++i) out(j, piv[i]) = R(static_cast<int>(i), r + j);
    return out;
}

std::vector<Q> charpoly(const Mat& A0) {
    // Hessenberg reduction followed by the standard recurrence
    const int n = A0.rows();
    Mat H = A0;
    for (int m = 1; m < n - 1; ++m) {
        int i = m + 1;
        while (i < n && H(i, m - 1) == 0) ++i;
        if (H(m, m - 1) == 0 && i < n) {
            for (int j = 0; j < n; ++j) std::swap(H(i, j), H(m, j));
            for (int j = 0; j < n; ++j) std::swap(H(j, i), H(j, m));
        }
        if (H(m, m - 1) == 0) continue;
        for (int r = m + 1; r < n; ++r) {
            if (H(r, m - 1) == 0) continue;
            Q u = H(r, m - 1) / H(m, m - 1);
            for (int j = 0; j < n; ++j) H(r, j) -= u * H(m, j);
            for (int j = 0; j < n; ++j) H(j, m) += u * H(j, r);
        }
    }
    std::vector<std::vector<Q>> p(n + 1);
    p[0] = {1};
    for (int m = 1; m <= n; ++m) {
        // p_m = (x - h_mm) p_{m-1} - sum ...
        std::vector<Q> next(m + 1, 0);
        for (int d = 0; d < m; ++d) {
            next[d + 1] += p[m - 1][d];
            next[d] -= H(m - 1, m - 1) * p[m - 1][d];
        }
        Q t = 1;
        for (int i = 1; i < m; ++i) {
            t *= H(m - i, m - i - 1);
            Q coef = t * H(m - i - 1, m - 1);
            if (coef == 0) continue;
            for (size_t d = 0; d < p[m - i - 1].size(); ++d) next[d] -= coef * p[m - i - 1][d];
        }
        p[m] = std::move(next);
    }
    return p[n];
}

Mat poly_eval(const std::vector<Q>& c, const Mat& A) {
    const int n = A.rows();
    Mat R(n, n);
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
        R = R * A;
        for (int j = 0; j < n; ++j) R(j, j) += c[i];
    }
    return R;
}

Mat hcat(const Mat& A, const Mat& B) {
    Mat C(A.rows(), A.cols() + B.cols());
    for (int i = 0; i < A.rows(); ++i) {
        for (int j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
        for (int j = 0; j < B.cols(); ++j) C(i, A.cols() + j) = B(i, j);
    }
    return C;
}

Mat inverse(const Mat& A) {
    const int n = A.rows();
    auto [R, piv] = rref(hcat(A, Mat::identity(n)));
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = R(i, n + j);
    return out;
}

}  // namespace imt::la

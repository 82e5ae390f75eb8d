#pragma once

// Dense exact linear algebra over Q. Vectors are rows; an operator T on a space
// with basis b_i is stored with row i = coordinates of T(b_i).

#include <gmpxx.h>

#include <vector>

namespace imt::la {

using Q = mpq_class;
using Vec = std::vector<Q>;

class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<size_t>(rows) * cols, 0) {}
    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows, int cols);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Q& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const Q& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }
    Vec row(int i) const;
    void set_row(int i, const Vec& v);
    bool operator==(const Mat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool is_zero() const;

private:
    int r_ = 0, c_ = 0;
    std::vector<Q> a_;
};

Mat operator*(const Mat& A, const Mat& B);
Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat scale(const Mat& A, const Q& s);
Mat transpose(const Mat& A);
Vec vec_mat(const Vec& v, const Mat& A);  // row vector times matrix
Vec mat_vec(const Mat& A, const Vec& v);  // matrix times column vector
Q dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& v);

struct Echelon {
    Mat R;                 // reduced row echelon form, zero rows dropped
    std::vector<int> pivots;
};
Echelon rref(Mat A);
int rank(const Mat& A);
// basis of {x : x A = 0} (left kernel), as rows
std::vector<Vec> left_kernel(const Mat& A);
// basis of {x : A x = 0}
std::vector<Vec> right_kernel(const Mat& A);
// coordinates of v in the row space basis; throws if v is not in the span
Vec coordinates(const std::vector<Vec>& basis, const Vec& v);
// matrix of the operator A on the invariant subspace spanned by basis rows
Mat restrict_to(const Mat& A, const std::vector<Vec>& basis);
// characteristic polynomial det(x I - A), coefficients low to high
std::vector<Q> charpoly(const Mat& A);
// sum c_i A^i
Mat poly_eval(const std::vector<Q>& c, const Mat& A);
Mat hcat(const Mat& A, const Mat& B);
// throws std::domain_error when singular
Mat inverse(const Mat& A);

}  // namespace imt::la

#include "levifill/types.hpp"

#include <algorithm>

namespace levifill {

bool solve_linear(Mat A, std::vector<double>& b) {
    int n = A.n;
    for (int col = 0; col < n; col++) {
        int piv = col;
        for (int r = col + 1; r < n; r++)
            if (std::fabs(A.at(r, col)) > std::fabs(A.at(piv, col))) piv = r;
        if (std::fabs(A.at(piv, col)) < 1e-14) return false;
        if (piv != col) {
            for (int j = 0; j < n; j++) std::swap(A.at(piv, j), A.at(col, j));
            std::swap(b[piv], b[col]);
        }
        double d = A.at(col, col);
        for (int r = col + 1; r < n; r++) {
            double f = A.at(r, col) / d;
            if (f == 0.0) continue;
            for (int j = col; j < n; j++) A.at(r, j) -= f * A.at(col, j);
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; r--) {
        double s = b[r];
        for (int j = r + 1; j < n; j++) s -= A.at(r, j) * b[j];
        b[r] = s / A.at(r, r);
    }
    return true;
}

void symmetric_eigen(const Mat& S, std::vector<double>& eigvals, Mat& V) {
    int n = S.n;
    Mat A = S;
    V = Mat(n, n);
    for (int i = 0; i < n; i++) V.at(i, i) = 1.0;

    for (int sweep = 0; sweep < 64; sweep++) {
        double off = 0;
        for (int i = 0; i < n; i++)
            for (int j = i + 1; j < n; j++) off += A.at(i, j) * A.at(i, j);
        if (off < 1e-28) break;
        for (int p = 0; p < n; p++) {
            for (int q = p + 1; q < n; q++) {
                double apq = A.at(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                double theta = (A.at(q, q) - A.at(p, p)) / (2 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1));
                double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
                for (int k = 0; k < n; k++) {
                    double akp = A.at(k, p), akq = A.at(k, q);
                    A.at(k, p) = c * akp - s * akq;
                    A.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; k++) {
                    double apk = A.at(p, k), aqk = A.at(q, k);
                    A.at(p, k) = c * apk - s * aqk;
                    A.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; k++) {
                    double vkp = V.at(k, p), vkq = V.at(k, q);
                    V.at(k, p) = c * vkp - s * vkq;
                    V.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    for (int i = 0; i < n; i++) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return A.at(i, i) > A.at(j, j); });

    eigvals.resize(n);
    Mat Vs(n, n);
    for (int j = 0; j < n; j++) {
        eigvals[j] = A.at(order[j], order[j]);
        for (int i = 0; i < n; i++) Vs.at(i, j) = V.at(i, order[j]);
    }
    V = Vs;
}

}  // namespace levifill

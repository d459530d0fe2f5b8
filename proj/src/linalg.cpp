#include "nmq/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmq::linalg {

SymmetricEigen eigh(const Eigen::MatrixXd& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("eigh needs a square matrix");
    SymmetricEigen out;
    if (h.rows() == 0) return out;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    return out;
}

void gemm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& c) {
    if (a.cols() != b.rows()) throw std::invalid_argument("gemm shape mismatch");
    c.resize(a.rows(), b.cols());
    c.noalias() = a * b;
}

namespace {

// One Lanczos build from psi (norm nrm). Fills alpha/beta and the basis; returns the dimension reached.
int lanczos(const SparseRowMatrix& h, const Eigen::VectorXcd& psi, double nrm, int m,
            std::vector<Eigen::VectorXcd>& q, std::vector<double>& alpha, std::vector<double>& beta) {
    q.clear();
    alpha.clear();
    beta.clear();
    q.push_back(psi / nrm);
    Eigen::VectorXcd w;
    for (int j = 0; j < m; ++j) {
        w = h * q[j];
        if (j > 0) w -= beta[j - 1] * q[j - 1];
        const double a = q[j].dot(w).real();
        alpha.push_back(a);
        w -= a * q[j];
        const double b = w.norm();
        beta.push_back(b);
        if (b < 1e-13 * (std::abs(a) + 1.0)) return j + 1;  // invariant subspace: exact
        if (j + 1 < m) q.push_back(w / b);
    }
    return m;
}

}  // namespace

int krylov_propagate(const SparseRowMatrix& h, Eigen::VectorXcd& psi, double dt, const KrylovOptions& opt) {
    if (dt == 0.0) return 0;
    const double nrm0 = psi.norm();
    if (nrm0 == 0.0) return 0;
    std::vector<Eigen::VectorXcd> q;
    std::vector<double> alpha, beta;
    double remaining = dt;
    int substeps = 0;
    const std::complex<double> I(0.0, 1.0);
    while (remaining > 0.0) {
        const double nrm = psi.norm();
        const int k = lanczos(h, psi, nrm, opt.max_dim, q, alpha, beta);
        const bool exact = k < opt.max_dim || beta[k - 1] < 1e-13;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
        Eigen::VectorXd off = Eigen::Map<Eigen::VectorXd>(beta.data(), std::max(k - 1, 0));
        es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
        const Eigen::MatrixXd& s = es.eigenvectors();
        const Eigen::VectorXd& lam = es.eigenvalues();

        double step = remaining;
        Eigen::VectorXcd c;
        for (int tries = 0;; ++tries) {
            // c = exp(-i T step) e1
            Eigen::VectorXcd ph(k);
            for (int i = 0; i < k; ++i) ph[i] = std::exp(-I * lam[i] * step) * s(0, i);
            c = s.cast<std::complex<double>>() * ph;
            const double err = exact ? 0.0 : beta[k - 1] * std::abs(c[k - 1]);
            if (err <= opt.tol || tries > 60) break;
            step *= 0.5;
        }
        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(psi.size());
        for (int i = 0; i < k; ++i) next += c[i] * q[i];
        psi = nrm * next;
        remaining -= step;
        if (remaining < 1e-15 * std::abs(dt)) remaining = 0.0;
        ++substeps;
    }
    return substeps;
}

}  // namespace nmq::linalg

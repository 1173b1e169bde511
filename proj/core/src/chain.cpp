#include "rmdp/chain.hpp"

#include <algorithm>
#include <functional>

#include "rmdp/tolerance.hpp"

namespace rmdp {

std::vector<const CommClass*> ClassDecomposition::recurrent() const {
    std::vector<const CommClass*> out;
    for (const auto& c : classes)
        if (c.recurrent) out.push_back(&c);
    return out;
}

std::vector<int> ClassDecomposition::transient_states() const {
    std::vector<int> out;
    for (const auto& c : classes)
        if (!c.recurrent) out.insert(out.end(), c.states.begin(), c.states.end());
    std::sort(out.begin(), out.end());
    return out;
}

int ClassDecomposition::class_of(int state) const {
    for (std::size_t k = 0; k < classes.size(); ++k) {
        const auto& s = classes[k].states;
        if (std::binary_search(s.begin(), s.end(), state)) return static_cast<int>(k);
    }
    return -1;
}

ClassDecomposition communication_classes(const Matrix& P) {
    const int n = static_cast<int>(P.rows());
    auto edge = [&](int i, int j) { return P(i, j) > kEdgeTol; };

    // Tarjan's algorithm.
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int counter = 0, ncomp = 0;
    std::function<void(int)> visit = [&](int v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (int w = 0; w < n; ++w) {
            if (!edge(v, w)) continue;
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            int w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = ncomp;
            } while (w != v);
            ++ncomp;
        }
    };
    for (int v = 0; v < n; ++v)
        if (index[v] < 0) visit(v);

    std::vector<CommClass> raw(ncomp);
    for (int v = 0; v < n; ++v) raw[comp[v]].states.push_back(v);
    for (int c = 0; c < ncomp; ++c) {
        bool closed = true;
        for (int i : raw[c].states)
            for (int j = 0; j < n && closed; ++j)
                if (comp[j] != c && edge(i, j)) closed = false;
        raw[c].recurrent = closed;
    }
    std::sort(raw.begin(), raw.end(),
              [](const CommClass& a, const CommClass& b) { return a.states[0] < b.states[0]; });
    return ClassDecomposition{std::move(raw)};
}

bool is_irreducible(const Matrix& P) { return communication_classes(P).classes.size() == 1; }

Vector class_invariant_distribution(const Matrix& P, const std::vector<int>& cls) {
    const int m = static_cast<int>(cls.size());
    Matrix A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = P(cls[j], cls[i]) - (i == j ? 1.0 : 0.0);
    Vector b = Vector::Zero(m);
    // One balance equation is redundant; the normalization replaces it.
    A.row(m - 1).setOnes();
    b(m - 1) = 1.0;
    auto q = solve_dense(A, b);
    if (!q) throw std::runtime_error("stationary system is singular");
    return *q;
}

Vector invariant_distribution(const Matrix& P) {
    auto d = communication_classes(P);
    if (d.classes.size() != 1) {
        std::string msg = "matrix is reducible with " + std::to_string(d.classes.size()) +
                          " communication classes";
        throw ReducibleError(msg, std::move(d));
    }
    return class_invariant_distribution(P, d.classes[0].states);
}

Matrix cesaro_limit(const Matrix& P) { return cesaro_limit(P, communication_classes(P)); }

Matrix cesaro_limit(const Matrix& P, const ClassDecomposition& d) {
    const int n = static_cast<int>(P.rows());
    Matrix C = Matrix::Zero(n, n);
    const auto rec = d.recurrent();
    std::vector<Vector> q;
    for (const auto* c : rec) {
        q.push_back(class_invariant_distribution(P, c->states));
        for (int i : c->states)
            for (std::size_t k = 0; k < c->states.size(); ++k) C(i, c->states[k]) = q.back()(k);
    }

    const auto trans = d.transient_states();
    const int t = static_cast<int>(trans.size());
    if (t == 0) return C;

    Matrix A(t, t);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < t; ++j) A(i, j) = (i == j ? 1.0 : 0.0) - P(trans[i], trans[j]);
    for (std::size_t r = 0; r < rec.size(); ++r) {
        Vector b(t);
        for (int i = 0; i < t; ++i) {
            double s = 0.0;
            for (int j : rec[r]->states) s += P(trans[i], j);
            b(i) = s;
        }
        auto a = solve_dense(A, b);
        if (!a) throw std::runtime_error("transient block is singular");
        for (int i = 0; i < t; ++i)
            for (std::size_t k = 0; k < rec[r]->states.size(); ++k)
                C(trans[i], rec[r]->states[k]) = (*a)(i) * q[r](k);
    }
    return C;
}

std::string describe_class(const std::vector<int>& cls, const std::vector<std::string>& names) {
    std::string s = "{";
    for (std::size_t k = 0; k < cls.size(); ++k) {
        if (k) s += ",";
        s += names.empty() ? std::to_string(cls[k] + 1) : names[cls[k]];
    }
    return s + "}";
}

}  // namespace rmdp

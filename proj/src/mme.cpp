#include "hypsol/mme.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

namespace hypsol {

namespace {

std::vector<bool> reachable_from(const std::vector<std::vector<int>>& rows, std::size_t s)
{
    std::vector<bool> seen(rows.size(), false);
    std::queue<std::size_t> q;
    seen[s] = true;
    q.push(s);
    while (!q.empty()) {
        const auto i = q.front();
        q.pop();
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (rows[i][j] && !seen[j]) {
                seen[j] = true;
                q.push(j);
            }
        }
    }
    return seen;
}

std::string state_set(const std::vector<std::size_t>& s)
{
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << (i ? "," : "") << s[i];
    }
    os << '}';
    return os.str();
}

}  // namespace

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> rows) : rows_(std::move(rows))
{
    const std::size_t n = rows_.size();
    if (n == 0) {
        throw DomainError("transition matrix needs at least one state");
    }
    for (const auto& r : rows_) {
        if (r.size() != n) {
            throw DomainError("transition matrix must be square");
        }
        for (int x : r) {
            if (x != 0 && x != 1) {
                throw DomainError("transition matrix entries must be 0 or 1");
            }
        }
    }
    // irreducible iff every state reaches every state
    irreducible_ = true;
    for (std::size_t s = 0; s < n && irreducible_; ++s) {
        const auto seen = reachable_from(rows_, s);
        std::vector<std::size_t> reach;
        std::vector<std::size_t> miss;
        for (std::size_t j = 0; j < n; ++j) {
            (seen[j] ? reach : miss).push_back(j);
        }
        if (!miss.empty()) {
            irreducible_ = false;
            witness_ = "states " + state_set(reach) + " reachable from state " + std::to_string(s) +
                       " never reach states " + state_set(miss);
        }
    }
    if (irreducible_ && n == 1 && rows_[0][0] == 0) {
        irreducible_ = false;
        witness_ = "state 0 has no successor";
    }
    if (!irreducible_) {
        return;
    }
    // period = gcd over edges i->j of level(i) + 1 - level(j), BFS levels from 0
    std::vector<long> level(n, -1);
    std::queue<std::size_t> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
        const auto i = q.front();
        q.pop();
        for (std::size_t j = 0; j < n; ++j) {
            if (rows_[i][j] && level[j] < 0) {
                level[j] = level[i] + 1;
                q.push(j);
            }
        }
    }
    long g = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (rows_[i][j]) {
                g = std::gcd(g, std::labs(level[i] + 1 - level[j]));
            }
        }
    }
    period_ = static_cast<std::size_t>(g);
    aperiodic_ = period_ == 1;
}

TransitionMatrix TransitionMatrix::from_adjacency_json(const nlohmann::json& j)
{
    std::vector<std::vector<std::size_t>> succ;
    if (j.is_array()) {
        for (const auto& r : j) {
            succ.push_back(r.get<std::vector<std::size_t>>());
        }
    } else if (j.is_object()) {
        succ.resize(j.size());
        for (const auto& [key, value] : j.items()) {
            std::size_t s = 0;
            try {
                s = std::stoul(key);
            } catch (const std::exception&) {
                throw DomainError("adjacency keys must be state indices, got '" + key + "'");
            }
            if (s >= succ.size()) {
                throw DomainError("adjacency keys must be 0..n-1");
            }
            succ[s] = value.get<std::vector<std::size_t>>();
        }
    } else {
        throw DomainError("adjacency list must be an array or an object");
    }
    const std::size_t n = succ.size();
    std::vector<std::vector<int>> rows(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto s : succ[i]) {
            if (s >= n) {
                throw DomainError("successor " + std::to_string(s) + " out of range");
            }
            rows[i][s] = 1;
        }
    }
    return TransitionMatrix(std::move(rows));
}

Eigen::MatrixXd TransitionMatrix::to_eigen() const
{
    const auto n = static_cast<Eigen::Index>(rows_.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = rows_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

namespace {

// Perron vector of a nonnegative irreducible matrix M and its eigenvalue.
std::pair<double, Eigen::VectorXd> perron_vector(const Eigen::MatrixXd& M)
{
    const auto n = M.rows();
    const Eigen::MatrixXd shifted = M + Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    for (int it = 0; it < 200000; ++it) {
        Eigen::VectorXd w = shifted * v;
        w /= w.maxCoeff();
        const double change = (w - v).cwiseAbs().maxCoeff();
        v = w;
        if (change < 1e-15) {
            break;
        }
    }
    double rho = (M * v).dot(v) / v.dot(v);
    // inverse iteration with the current estimate
    for (int it = 0; it < 3; ++it) {
        const Eigen::MatrixXd S = M - (rho + 1e-12) * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd w = S.fullPivLu().solve(v);
        if (!w.allFinite() || w.norm() == 0.0) {
            break;
        }
        w /= w.maxCoeff();
        v = w;
        rho = (M * v).dot(v) / v.dot(v);
    }
    v /= v.minCoeff();
    return {rho, v};
}

}  // namespace

PerronData entropy_sft(const TransitionMatrix& T)
{
    if (!T.irreducible()) {
        throw DomainError("entropy_sft: reducible transition matrix: " + T.reducibility_witness());
    }
    const Eigen::MatrixXd M = T.to_eigen();
    auto [rho, right] = perron_vector(M);
    auto [rho_t, left] = perron_vector(M.transpose());
    (void)rho_t;
    PerronData p;
    p.h = std::log(rho);
    p.right_vec = right;
    p.left_vec = left / left.dot(right);
    p.normalization = "right vector with minimum component 1; left vector with left . right = 1";
    return p;
}

Word parse_word(const std::string& text)
{
    Word w;
    if (text.find(',') != std::string::npos) {
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ',')) {
            try {
                w.push_back(std::stoul(part));
            } catch (const std::exception&) {
                throw DomainError("malformed word '" + text + "'");
            }
        }
        return w;
    }
    for (char c : text) {
        if (c < '0' || c > '9') {
            throw DomainError("malformed word '" + text + "'");
        }
        w.push_back(static_cast<std::size_t>(c - '0'));
    }
    return w;
}

std::string format_word(const Word& w, std::size_t states)
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (states > 10 && i > 0) {
            out += ',';
        }
        out += std::to_string(w[i]);
    }
    return out;
}

bool admissible(const TransitionMatrix& T, const Word& w)
{
    if (w.empty()) {
        return false;
    }
    for (auto s : w) {
        if (s >= T.states()) {
            return false;
        }
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!T.allowed(w[i], w[i + 1])) {
            return false;
        }
    }
    return true;
}

double rs_unstable_weight(const TransitionMatrix& T, const PerronData& perron, const Word& word)
{
    if (!admissible(T, word)) {
        throw DomainError("rs_unstable_weight: inadmissible word " + format_word(word, T.states()));
    }
    const double n = static_cast<double>(word.size() - 1);
    return std::exp(-n * perron.h) * perron.right_vec(static_cast<Eigen::Index>(word.back()));
}

std::vector<Word> admissible_words(const TransitionMatrix& T, std::size_t length)
{
    std::vector<Word> words;
    if (length == 0) {
        return words;
    }
    for (std::size_t s = 0; s < T.states(); ++s) {
        words.push_back({s});
    }
    for (std::size_t l = 1; l < length; ++l) {
        std::vector<Word> next;
        for (const auto& w : words) {
            for (std::size_t s = 0; s < T.states(); ++s) {
                if (T.allowed(w.back(), s)) {
                    Word x = w;
                    x.push_back(s);
                    next.push_back(std::move(x));
                }
            }
        }
        words = std::move(next);
    }
    return words;
}

std::string weights_csv(const TransitionMatrix& T, const PerronData& perron, std::size_t length)
{
    std::ostringstream os;
    os.precision(17);
    os << "word,weight\n";
    for (const auto& w : admissible_words(T, length)) {
        os << format_word(w, T.states()) << ',' << rs_unstable_weight(T, perron, w) << '\n';
    }
    return os.str();
}

namespace {

// Coefficient functional of the E+ direction, in the chosen normalization.
Eigen::RowVectorXd unstable_functional(const IntMatrix& A, UnstableNormalization norm, double* eigenvalue)
{
    const auto s = splitting(A);
    if (s.dim_plus() != 1) {
        throw DomainError("unstable_length needs dim E+ = 1, matrix " + A.to_string() + " has dim E+ = " +
                          std::to_string(s.dim_plus()));
    }
    Eigen::RowVectorXd f = s.basis_inverse.row(0);
    if (norm == UnstableNormalization::FirstComponentOne) {
        // e+ scaled to first nonzero component 1; its coefficient scales inversely
        const Eigen::VectorXd e = s.basis_plus.col(0);
        for (Eigen::Index i = 0; i < e.size(); ++i) {
            if (std::fabs(e(i)) > 1e-12) {
                f *= e(i);
                break;
            }
        }
    }
    if (eigenvalue != nullptr) {
        *eigenvalue = s.block_plus(0, 0);
    }
    return f;
}

}  // namespace

double unstable_length(const LinearModelPath& model, UnstableNormalization norm)
{
    const Eigen::RowVectorXd f = unstable_functional(model.A, norm, nullptr);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < model.vertices.size(); ++i) {
        total += f.dot(model.vertices[i + 1] - model.vertices[i]);
    }
    return total;
}

ScalingCheck unstable_length_scaling_check(const LinearModelPath& model, UnstableNormalization norm)
{
    LinearModelPath image{model.A, {}};
    const Eigen::MatrixXd a = model.A.to_eigen();
    for (const auto& v : model.vertices) {
        image.vertices.push_back(a * v);
    }
    return ScalingCheck{unstable_length(model, norm), unstable_length(image, norm)};
}

}  // namespace hypsol

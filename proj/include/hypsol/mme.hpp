#pragma once

// Entropy and maximal-entropy unstable weights for subshifts of finite type,
// and the signed unstable length of paths in a linear toral model.

#include "hypsol/linalg_torus.hpp"

#include <json.hpp>

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace hypsol {

class TransitionMatrix {
public:
    /// Square 0/1 matrix; throws DomainError on other entries.
    explicit TransitionMatrix(std::vector<std::vector<int>> rows);
    /// {"0": [0, 1], "1": [0]} or [[0, 1], [0]]: allowed successors per state.
    static TransitionMatrix from_adjacency_json(const nlohmann::json& j);

    std::size_t states() const { return rows_.size(); }
    bool allowed(std::size_t i, std::size_t j) const { return rows_[i][j] != 0; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }

    bool irreducible() const { return irreducible_; }
    bool aperiodic() const { return aperiodic_; }
    std::size_t period() const { return period_; }

    /// Describes a class that cannot reach some other state, for reducible matrices.
    const std::string& reducibility_witness() const { return witness_; }

    Eigen::MatrixXd to_eigen() const;

private:
    std::vector<std::vector<int>> rows_;
    bool irreducible_ = false;
    bool aperiodic_ = false;
    std::size_t period_ = 0;
    std::string witness_;
};

struct PerronData {
    double h = 0.0;  // log of the spectral radius, nats
    Eigen::VectorXd right_vec;
    Eigen::VectorXd left_vec;
    std::string normalization;
};

/// Power iteration on T + I from the all-ones vector (T + I is primitive for
/// every irreducible T), then inverse-iteration refinement.
PerronData entropy_sft(const TransitionMatrix& T);

using Word = std::vector<std::size_t>;

Word parse_word(const std::string& text);  // "0110" or "0,1,10"
std::string format_word(const Word& w, std::size_t states);

bool admissible(const TransitionMatrix& T, const Word& w);

/// e^{-n h} right_vec[i_n] for the word i_0 ... i_n.
double rs_unstable_weight(const TransitionMatrix& T, const PerronData& perron, const Word& word);

/// All admissible words of the given length, lexicographic.
std::vector<Word> admissible_words(const TransitionMatrix& T, std::size_t length);

/// "word,weight" lines with a header.
std::string weights_csv(const TransitionMatrix& T, const PerronData& perron, std::size_t length);

enum class UnstableNormalization { UnitLength, FirstComponentOne };

struct LinearModelPath {
    IntMatrix A;
    std::vector<Eigen::VectorXd> vertices;
};

/// Signed E+ coefficient of the total displacement, summed over segments,
/// with the E+ basis vector oriented by a positive first nonzero component.
double unstable_length(const LinearModelPath& model,
                       UnstableNormalization norm = UnstableNormalization::UnitLength);

struct ScalingCheck {
    double original = 0.0;
    double image = 0.0;  // l^u of A applied to the path
};

ScalingCheck unstable_length_scaling_check(const LinearModelPath& model,
                                           UnstableNormalization norm = UnstableNormalization::UnitLength);

}  // namespace hypsol

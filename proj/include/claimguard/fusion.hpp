#pragma once

#include "claimguard/core.hpp"

#include <string>
#include <vector>

namespace claimguard {

struct DegenerateData : Error {
    using Error::Error;
};

/// Learned fusion weights. alpha+beta+gamma normalize to 1; bias is the
/// decision offset used only for verdict thresholding.
struct FusionWeights {
    double alpha = 1.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gamma = 1.0 / 3.0;
    double bias = 0.0;

    void normalize(); // clip to >= 0, rescale to sum 1; throws on zero sum
    static FusionWeights load_file(const std::string& path);
    static FusionWeights parse(const std::string& text);
    std::string serialize() const; // "alpha beta gamma bias"
    void save_file(const std::string& path) const;
};

/// 1 - mean(confidence) when generator confidences are present, else the
/// fraction of unverifiable claims; zero claims -> 0.5 (maximum ignorance).
double uncertainty(const Response& response, const std::vector<ClaimStatus>& statuses);

/// score = alpha*p_causal + beta*p_symbolic + gamma*u, exactly.
/// Throws InputOutOfRange unless all inputs lie in [0,1].
double fuse(double p_causal, double p_symbolic, double u, const FusionWeights& w);

/// (contradicted + 0.5*unverifiable) / total; zero claims -> 0.
double p_symbolic(const std::vector<ClaimStatus>& statuses);

struct FitExample {
    double p_causal = 0.0;
    double p_symbolic = 0.0;
    double u = 0.0;
    int label = 0; // 1 = hallucinated
};

struct FitResult {
    FusionWeights weights;
    std::vector<double> loss_curve; // per epoch, non-increasing
    double accuracy = 0.0;          // at probability threshold 0.5
};

/// Full-batch gradient descent on the cross-entropy of sigmoid(w.x + bias),
/// weights clipped to >= 0 and renormalized each step; the learning rate
/// halves whenever a step would increase the loss. Deterministic.
FitResult fit_weights(const std::vector<FitExample>& examples, std::uint64_t seed = 0,
                      int epochs = 500, double learning_rate = 1.0);

/// Examples file: whitespace-separated `p_causal p_symbolic u label` lines,
/// `#` comments.
std::vector<FitExample> load_fit_examples(const std::string& path);
std::vector<FitExample> parse_fit_examples(const std::string& text);

} // namespace claimguard

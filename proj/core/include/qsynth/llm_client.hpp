#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "qsynth/proposer.hpp"

namespace qsynth {

struct PromptPair {
    std::string system;
    std::string user;
    bool operator==(const PromptPair&) const = default;
};

struct LlmParams {
    std::string base_url = "https://api.openai.com/v1";
    std::string endpoint_path = "/chat/completions";
    std::string model;
    std::string api_key;
    double temperature = 0.7;
    std::chrono::milliseconds timeout{120000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{8000};

    // Defaults overridden by LLM_API_KEY, LLM_BASE_URL and LLM_MODEL when set.
    static LlmParams from_environment();
    // Throws ParameterError.
    void validate() const;
};

/// "You obtained an improvement of about +0.12 in the MW measure." and the
/// matching loss sentence; |delta| < 0.005 gets a no-change sentence.
std::string format_feedback(double delta_q);

/// System and user prompt for one step. The feedback sentence is included
/// only when `feedback_enabled` and the context carries a delta.
PromptPair build_prompt(const ProposalContext& context, bool feedback_enabled);

// Chat-completion request body: model, temperature, [system, user] messages.
std::string chat_request_body(const PromptPair& prompt, const LlmParams& params);

// choices[0].message.content of a chat-completion response. Throws ProtocolError.
std::string extract_chat_content(std::string_view response_body);

struct Completion {
    std::string text;
    std::chrono::nanoseconds latency{0};
    int attempts = 0;
};

/**
 * One chat-completion round trip. Transport failures, 429 and 5xx replies are
 * retried up to `max_retries` times with exponential backoff; other statuses
 * and malformed bodies fail immediately. The assistant text is returned
 * byte-for-byte.
 *
 * Throws TransportError once retries are exhausted, ProtocolError otherwise.
 */
Completion complete(const PromptPair& prompt, const LlmParams& params);

// Prompt -> completion -> curation. Network failures come back as a failed
// outcome, never as an exception.
class LlmProposer final : public Proposer {
public:
    LlmProposer(LlmParams params, bool feedback_enabled);
    ProposalOutcome propose(const ProposalContext& context) override;
    std::string id() const override { return "llm:" + params_.model; }

private:
    LlmParams params_;
    bool feedback_enabled_;
};

}  // namespace qsynth

#include "qsynth/llm_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "qsynth/errors.hpp"

namespace qsynth {

namespace {

using json = nlohmann::json;

std::string env_or(const char* name, std::string fallback) {
    const char* value = std::getenv(name);
    return value && *value ? std::string(value) : std::move(fallback);
}

std::string gate_set_literal() { return "['H', 'RY', 'CNOT']"; }

// "{3.0,10.0,25.0}" and "3.0, 10.0, 25.0"
std::string angle_braces(const AngleSet& angles) {
    std::string out = "{";
    for (std::size_t i = 0; i < angles.values().size(); ++i) {
        if (i) out += ",";
        out += format_angle(angles.values()[i]);
    }
    return out + "}";
}

std::string angle_list(const AngleSet& angles) {
    std::string out;
    for (std::size_t i = 0; i < angles.values().size(); ++i) {
        if (i) out += ", ";
        out += format_angle(angles.values()[i]);
    }
    return out;
}

struct Endpoint {
    std::string scheme_host_port;
    std::string path;
};

Endpoint split_url(const LlmParams& params) {
    const std::string& url = params.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ParameterError("base URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint endpoint;
    endpoint.scheme_host_port = url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    std::string suffix = params.endpoint_path;
    if (!suffix.empty() && suffix.front() != '/') suffix.insert(suffix.begin(), '/');
    endpoint.path = prefix + suffix;
    return endpoint;
}

bool retryable_status(int status) { return status == 429 || status >= 500; }

}  // namespace

LlmParams LlmParams::from_environment() {
    LlmParams params;
    params.api_key = env_or("LLM_API_KEY", params.api_key);
    params.base_url = env_or("LLM_BASE_URL", params.base_url);
    params.model = env_or("LLM_MODEL", params.model);
    return params;
}

void LlmParams::validate() const {
    if (base_url.empty()) throw ParameterError("LLM base URL is empty");
    if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0) {
        throw ParameterError("LLM base URL must start with http:// or https://: " + base_url);
    }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (base_url.rfind("https://", 0) == 0) throw ParameterError("built without TLS support; https endpoints unavailable");
#endif
    if (model.empty()) throw ParameterError("LLM model is not set (LLM_MODEL or --model)");
    if (!(temperature >= 0.0)) throw ParameterError("temperature must be >= 0");
    if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
    if (timeout.count() <= 0) throw ParameterError("timeout must be positive");
}

std::string format_feedback(double delta_q) {
    char amount[32];
    std::snprintf(amount, sizeof amount, "%.2f", std::fabs(delta_q));
    if (delta_q >= 0.005) return std::string("You obtained an improvement of about +") + amount + " in the MW measure.";
    if (delta_q <= -0.005) return std::string("You obtained a loss of about -") + amount + " in the MW measure.";
    return "You obtained essentially no change in the MW measure.";
}

PromptPair build_prompt(const ProposalContext& context, bool feedback_enabled) {
    const AngleSet& angles = context.allowed_angles;
    const std::string gates = gate_set_literal();

    PromptPair prompt;
    prompt.system =
        "You are an expert in PennyLane circuits and entanglement. "
        "Modify each tuple using only gates from " + gates + ". "
        "Use angles from " + angle_braces(angles) + " for the RY gate. "
        "Use ASCII only. "
        "The evaluation metric of the circuit's performance is the Meyer-Wallach global entanglement.";

    std::string user =
        "You are given a quantum circuit list of tuples. "
        "GOAL: Think step-by-step, you want to improve the Meyer Wallach entanglement of the new state you create "
        "by modifying the list " + serialize(context.current_circuit) + ". ";
    if (feedback_enabled && context.delta_q) user += format_feedback(*context.delta_q) + " ";
    user +=
        "Allowed gates: " + gates + ". "
        "Transform the circuit substantially, not minimally. "
        "Do NOT produce minor edits to the previous version—aim for creative leaps. "
        "Think step-by-step, like an experimental quantum designer: search for surprising, high-entanglement "
        "patterns by creatively reshaping the circuit architecture. "
        "Do NOT add explanations, comments or code fences. "
        "Everything between <python> and </python> must be a valid LIST. "
        "Each gate must be one of:\n"
        "  ['H', [wire]]\n"
        "  ['RY', [angle, wire]]\n"
        "  ['CNOT', [control-wire, target-wire]]\n"
        "Where wire is an integer from 0 to " + std::to_string(context.current_circuit.num_qubits - 1) +
        " and angle is one of " + angle_list(angles) + ". "
        "IMPORTANT: do not add or remove gates, only modify existing ones.";
    prompt.user = std::move(user);
    return prompt;
}

std::string chat_request_body(const PromptPair& prompt, const LlmParams& params) {
    json body = {
        {"model", params.model},
        {"temperature", params.temperature},
        {"messages",
         json::array({{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}})},
    };
    return body.dump();
}

std::string extract_chat_content(std::string_view response_body) {
    json body = json::parse(response_body, nullptr, /*allow_exceptions=*/false);
    if (body.is_discarded()) throw ProtocolError("response body is not JSON");
    if (!body.is_object() || !body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
        throw ProtocolError("response has no choices");
    }
    const json& choice = body["choices"][0];
    if (!choice.is_object() || !choice.contains("message") || !choice["message"].is_object()) {
        throw ProtocolError("first choice has no message");
    }
    const json& message = choice["message"];
    if (!message.contains("content") || !message["content"].is_string()) {
        throw ProtocolError("message has no string content");
    }
    return message["content"].get<std::string>();
}

Completion complete(const PromptPair& prompt, const LlmParams& params) {
    params.validate();
    const Endpoint endpoint = split_url(params);
    const std::string body = chat_request_body(prompt, params);

    httplib::Client client(endpoint.scheme_host_port);
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(params.timeout);
    const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(params.timeout - seconds);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    httplib::Headers headers;
    if (!params.api_key.empty()) headers.emplace("Authorization", "Bearer " + params.api_key);

    Completion completion;
    const auto start = std::chrono::steady_clock::now();
    std::string last_failure;
    for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto factor = std::int64_t{1} << std::min(attempt - 1, 20);
            const auto delay = std::min(params.backoff_base * factor, params.backoff_cap);
            std::this_thread::sleep_for(delay);
        }
        ++completion.attempts;
        auto result = client.Post(endpoint.path, headers, body, "application/json");
        if (!result) {
            last_failure = httplib::to_string(result.error());
            continue;
        }
        if (retryable_status(result->status)) {
            last_failure = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status < 200 || result->status >= 300) {
            throw ProtocolError("HTTP " + std::to_string(result->status) + ": " + result->body.substr(0, 200));
        }
        completion.text = extract_chat_content(result->body);
        completion.latency = std::chrono::steady_clock::now() - start;
        return completion;
    }
    throw TransportError(last_failure + " after " + std::to_string(completion.attempts) + " attempt(s) to " +
                         endpoint.scheme_host_port + endpoint.path);
}

LlmProposer::LlmProposer(LlmParams params, bool feedback_enabled)
    : params_(std::move(params)), feedback_enabled_(feedback_enabled) {
    params_.validate();
}

ProposalOutcome LlmProposer::propose(const ProposalContext& context) {
    const auto start = std::chrono::steady_clock::now();
    ProposalOutcome outcome;
    try {
        Completion completion = complete(build_prompt(context, feedback_enabled_), params_);
        outcome = interpret_proposal(std::move(completion.text), context.current_circuit.num_qubits, id());
    } catch (const Error& e) {
        outcome.proposer_id = id();
        outcome.parsed = ProposalFailure{e.what()};
    }
    outcome.latency = std::chrono::steady_clock::now() - start;
    return outcome;
}

}  // namespace qsynth

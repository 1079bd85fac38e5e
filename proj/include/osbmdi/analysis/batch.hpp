// Copyright 2026 The osbmdi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "osbmdi/adversary/attacks.hpp"
#include "osbmdi/protocol/session.hpp"

namespace osbmdi {

/// Runs one session with the adversary described by its config.
inline SessionReport simulate_session(const SessionConfig& cfg, std::uint64_t index) {
    const auto eve = make_adversary(cfg.attack);
    return run_session(cfg, index, eve.get());
}

struct BatchOptions {
    std::size_t sessions = 1;
    unsigned threads = 0;  // 0: hardware concurrency
    bool keep_transcripts = true;
};

/// Sessions 0..sessions-1 spread over worker threads. Results are indexed by
/// session, so the output does not depend on scheduling.
inline std::vector<SessionReport> run_batch(const SessionConfig& cfg, const BatchOptions& opt) {
    cfg.validate();
    std::vector<SessionReport> out(opt.sessions);
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, opt.sessions)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < opt.sessions; i = next++) {
            try {
                out[i] = simulate_session(cfg, i);
                if (!opt.keep_transcripts) {
                    out[i].transcript.clear();
                    for (auto& n : out[i].nested) n.transcript.clear();
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace osbmdi

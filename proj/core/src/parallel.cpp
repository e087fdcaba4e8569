// Copyright 2026 The ghzsim Authors
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

#include "ghzsim/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace ghzsim {

int max_threads() {
    if (const char* env = std::getenv("GHZSIM_THREADS")) {
        int n = 0;
        const char* end = env + std::strlen(env);
        if (auto [p, ec] = std::from_chars(env, end, n); ec == std::errc{} && p == end && n > 0) {
            return n;
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace ghzsim

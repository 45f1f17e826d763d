// Copyright 2026 The govgw Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef GOVGW_CAPABILITY_CODEC_HPP_
#define GOVGW_CAPABILITY_CODEC_HPP_

#include <string>
#include <string_view>

namespace govgw::capability {

// RFC 4648 base64 with padding.
std::string base64_encode(std::string_view bytes);
// Throws kInvalidArgument on malformed input.
std::string base64_decode(std::string_view text);

enum class HashAlg { kSha256, kSha512 };

std::string_view to_string(HashAlg alg);
// Accepts "sha-256" and "sha-512". Throws kInvalidConfigValue.
HashAlg hash_alg_from_string(std::string_view name);
// Lower-case hex digest.
std::string hex_digest(HashAlg alg, std::string_view bytes);
std::size_t hex_digest_size(HashAlg alg);

}  // namespace govgw::capability

#endif  // GOVGW_CAPABILITY_CODEC_HPP_

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
#include "govgw/capability/codec.hpp"

#include <openssl/evp.h>

#include <vector>

#include "govgw/common/error.hpp"

namespace govgw::capability {

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::string base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) throw Error(Errc::kInvalidArgument, "base64 length not a multiple of 4");
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
              c == '+' || c == '/' || (c == '=' && i + 2 >= text.size());
    if (!ok) throw Error(Errc::kInvalidArgument, "invalid base64 character");
  }
  std::string out(3 * text.size() / 4, '\0');
  int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(text.data()),
                          static_cast<int>(text.size()));
  if (n < 0) throw Error(Errc::kInvalidArgument, "malformed base64");
  // EVP_DecodeBlock keeps the bytes standing in for padding.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string_view to_string(HashAlg alg) {
  return alg == HashAlg::kSha256 ? "sha-256" : "sha-512";
}

HashAlg hash_alg_from_string(std::string_view name) {
  if (name == "sha-256") return HashAlg::kSha256;
  if (name == "sha-512") return HashAlg::kSha512;
  throw Error(Errc::kInvalidConfigValue, "unsupported hash algorithm '" + std::string(name) + "'");
}

std::size_t hex_digest_size(HashAlg alg) { return alg == HashAlg::kSha256 ? 64 : 128; }

std::string hex_digest(HashAlg alg, std::string_view bytes) {
  const EVP_MD* md = alg == HashAlg::kSha256 ? EVP_sha256() : EVP_sha512();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, md, nullptr) != 1) {
    throw Error(Errc::kStorageFailure, "digest computation failed");
  }
  static const char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

}  // namespace govgw::capability

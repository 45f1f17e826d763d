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
#include <openssl/evp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include "bench.hpp"
#include "criteria.hpp"
#include "govgw/capability/services.hpp"
#include "govgw/capability/xml_token.hpp"
#include "govgw/common/time.hpp"
#include "govgw/harness/scenario.hpp"

namespace acceptance {

using govgw::capability::AuditRecord;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(GOVGW_GOLDEN_DIR) + "/" + name, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string openssl_base64(const std::string& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3) + 1, '\0');
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                          reinterpret_cast<const unsigned char*>(bytes.data()),
                          static_cast<int>(bytes.size()));
  out.resize(n);
  return out;
}

govgw::registry::CapabilityDescriptor vms_fixture_descriptor(const std::string& id) {
  for (const auto& d : vms_fixture().registry_seed) {
    if (d.capability_id == id) return d;
  }
  throw std::runtime_error("no descriptor " + id);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Line (1-based) holding byte pos; a newline belongs to the line it ends.
std::uint64_t line_of(const std::string& text, std::size_t pos) {
  return 1 + std::count(text.begin(), text.begin() + pos, '\n');
}

}  // namespace

Result audit_completeness() {
  Bench bench;
  std::size_t sent = 0;
  for (const std::string id : {"cp1", "cp2", "cp3"}) {
    bench.enact(id);
    for (const auto& m : vms_fixture().corpus) {
      if (m.route != id) continue;
      bench.gateway().process(id, to_message(m));
      ++sent;
    }
  }
  collect_trails("workload", bench.deployment());

  std::size_t attempts = 0, records = 0, trails = 0;
  for (const auto& t : collected_trails()) {
    auto c = govgw::harness::check_audit_completeness(t.records, t.pipeline_history);
    if (!c.ok) return {false, t.label + ": " + c.problems.front()};
    auto chain = govgw::capability::verify_chain(t.records);
    if (!chain.ok) return {false, t.label + ": chain breaks at " + std::to_string(*chain.bad_seq)};
    attempts += c.attempts;
    records += t.records.size();
    ++trails;
  }
  if (attempts < sent) return {false, "fewer attempts audited than messages sent"};

  // Tampering with a persisted trail is pinned to the exact record.
  std::mt19937 rng(0x7a3b);
  auto dir = std::filesystem::temp_directory_path() / ("govgw-tamper-" + std::to_string(rng()));
  std::filesystem::create_directories(dir);
  std::string text;
  {
    govgw::capability::AuditStore store(dir.string());
    auto trail = store.trail("tamper");
    for (int i = 0; i < 60; ++i) {
      trail->append("inst-" + std::to_string(i % 4), "step", i % 5 ? "success" : "denied",
                    "msg=" + std::to_string(i) + " v=1 detail",
                    i < 30 ? govgw::capability::HashAlg::kSha256
                           : govgw::capability::HashAlg::kSha512);
    }
    text = read_file(*store.file_for("tamper"));
  }
  std::filesystem::remove_all(dir);
  if (!govgw::capability::verify_jsonl(text).ok) return {false, "pristine file does not verify"};
  const int flips = 2000;
  for (int i = 0; i < flips; ++i) {
    std::string copy = text;
    std::size_t pos = std::uniform_int_distribution<std::size_t>(0, copy.size() - 1)(rng);
    copy[pos] = static_cast<char>(copy[pos] ^ std::uniform_int_distribution<int>(1, 255)(rng));
    auto c = govgw::capability::verify_jsonl(copy);
    if (c.ok || !c.bad_seq || *c.bad_seq != line_of(text, pos)) {
      return {false, "flip at byte " + std::to_string(pos) + " reported as " +
                         (c.bad_seq ? std::to_string(*c.bad_seq) : std::string("clean"))};
    }
  }
  // Deleting a line.
  for (std::uint64_t line = 1; line <= 60; line += 7) {
    std::size_t start = 0;
    for (std::uint64_t k = 1; k < line; ++k) start = text.find('\n', start) + 1;
    std::string copy = text;
    copy.erase(start, text.find('\n', start) + 1 - start);
    auto c = govgw::capability::verify_jsonl(copy);
    if (c.ok || *c.bad_seq != line) return {false, "deleted line " + std::to_string(line) + " missed"};
  }

  // Field edits of in-memory records.
  std::vector<AuditRecord> trail;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    trail.push_back(govgw::capability::record_from_json(nlohmann::json::parse(line)));
  }
  for (int i = 0; i < 500; ++i) {
    auto copy = trail;
    std::size_t at = std::uniform_int_distribution<std::size_t>(0, copy.size() - 1)(rng);
    AuditRecord& r = copy[at];
    switch (i % 6) {
      case 0: r.detail += "x"; break;
      case 1: r.outcome = r.outcome == "success" ? "denied" : "success"; break;
      case 2: r.instance_id += "-evil"; break;
      case 3: r.timestamp[3] = r.timestamp[3] == '0' ? '1' : '0'; break;
      case 4: r.action = "forged"; break;
      case 5: r.chain[r.chain.size() / 2] = r.chain[r.chain.size() / 2] == 'a' ? 'b' : 'a'; break;
    }
    auto c = govgw::capability::verify_chain(copy);
    if (c.ok || *c.bad_seq != r.seq) return {false, "in-memory edit of " + std::to_string(r.seq) + " missed"};
  }
  return {true, std::to_string(trails) + " trails, " + std::to_string(attempts) + " attempts, " +
                    std::to_string(records) + " records complete and verified; " +
                    std::to_string(flips) + " byte flips, 9 deletions and 500 edits pinned"};
}

Result bit_exactness() {
  using govgw::capability::XmlToken;
  const std::string basic = golden("cp1_basic.txt");
  if (basic != "Basic " + openssl_base64("vms:pw1") ||
      golden("basic_aladdin.txt") != "Basic " + openssl_base64("Aladdin:open sesame")) {
    return {false, "golden basic values disagree with OpenSSL"};
  }
  govgw::capability::BasicAuthService svc("basic-1", vms_fixture_descriptor("sts-basic"));
  svc.configure({}, {});
  auto r = svc.invoke("apply", {{"login", "vms"}, {"password", "pw1"}});
  if (r.emitted_metadata["header:Authorization"] != basic) return {false, "service header differs"};
  r = svc.invoke("apply", {{"login", "Aladdin"}, {"password", "open sesame"}});
  if (r.emitted_metadata["header:Authorization"] != golden("basic_aladdin.txt")) {
    return {false, "service header differs on the reference vector"};
  }
  // Every length modulo 3 against OpenSSL.
  std::mt19937 rng(0xb64);
  for (int n = 0; n < 300; ++n) {
    std::string bytes(n, '\0');
    for (auto& c : bytes) c = static_cast<char>(rng());
    if (govgw::capability::base64_encode(bytes) != openssl_base64(bytes)) {
      return {false, "base64 differs at length " + std::to_string(n)};
    }
  }

  const std::string issued = "2026-01-01T00:00:00Z";
  if (govgw::capability::render_token({"vms3", "pw3", issued}) != golden("cp3_token.txt") ||
      govgw::capability::render_token({"a&b<c>", "\"p'w\"", issued}) !=
          golden("cp3_token_escaped.txt")) {
    return {false, "token rendering differs from golden"};
  }
  if (!(govgw::capability::parse_token(golden("cp3_token_escaped.txt")) ==
        XmlToken{"a&b<c>", "\"p'w\"", issued})) {
    return {false, "escaped token does not round-trip"};
  }

  // Through the gateway.
  Bench bench;
  for (const std::string id : {"cp1", "cp2", "cp3"}) bench.enact(id);
  auto cp1 = corpus_for("cp1", true).front();
  bench.gateway().process("cp1", to_message(cp1));
  auto d1 = bench.delivered("cp1");
  if (d1.size() != 1 || d1[0].headers["Authorization"] != basic || d1[0].body != cp1.body) {
    return {false, "cp1 delivery differs from golden"};
  }
  auto cp2 = corpus_for("cp2", true).front();
  bench.gateway().process("cp2", to_message(cp2));
  auto d2 = bench.delivered("cp2");
  if (d2.size() != 1 ||
      !std::regex_match(d2[0].headers[std::string(govgw::capability::kProofHeader)],
                        std::regex("proof-[0-9a-f]{16}"))) {
    return {false, "cp2 proof header malformed"};
  }
  auto cp3 = corpus_for("cp3", true).front();
  const std::string now = govgw::format_iso8601(std::chrono::system_clock::now());
  cp3.headers["X-Timestamp"] = now;
  bench.gateway().process("cp3", to_message(cp3));
  auto d3 = bench.delivered("cp3");
  std::string token = golden("cp3_token.txt");
  token.replace(token.find(issued), issued.size(), now);
  if (d3.size() != 1 || d3[0].body != token + cp3.body) return {false, "cp3 body differs from golden"};
  return {true, "basic header, 300 base64 lengths, two token renderings and three gateway "
                "deliveries match golden bytes"};
}

}  // namespace acceptance

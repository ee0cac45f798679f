/* Copyright 2026 The Y2Seq Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "y2s/error.hpp"
#include "y2s/model.hpp"

Y2S_NAMESPACE_BEGIN

namespace {

constexpr const char* kMagic = "y2seq-checkpoint v1";

std::uint32_t to_little_endian(std::uint32_t x) {
  if constexpr (std::endian::native == std::endian::big) {
    return ((x & 0xffu) << 24) | ((x & 0xff00u) << 8) | ((x >> 8) & 0xff00u) | (x >> 24);
  }
  return x;
}

void write_payload(std::ostream& os, const Tensor& t) {
  std::vector<char> buf(t.size() * 4);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto bits = to_little_endian(std::bit_cast<std::uint32_t>(static_cast<float>(t[i])));
    std::memcpy(buf.data() + i * 4, &bits, 4);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void read_payload(std::istream& is, Tensor& t, const std::string& name) {
  std::vector<char> buf(t.size() * 4);
  is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (is.gcount() != static_cast<std::streamsize>(buf.size())) {
    fail_io("checkpoint: truncated payload for tensor " + name);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::uint32_t bits;
    std::memcpy(&bits, buf.data() + i * 4, 4);
    t[i] = static_cast<Real>(std::bit_cast<float>(to_little_endian(bits)));
  }
}

std::string read_line(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) fail_io("checkpoint: unexpected end of manifest");
  return line;
}

int read_field(std::istream& is, const std::string& key) {
  std::istringstream ls(read_line(is));
  std::string k;
  long long v = 0;
  if (!(ls >> k >> v) || k != key) fail_io("checkpoint: expected manifest field '" + key + "'");
  return static_cast<int>(v);
}

}  // namespace

void save_checkpoint(const ModelParams& params, std::span<const std::string> vocab,
                     const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail_io("checkpoint: cannot open " + path + " for writing");
  const ModelConfig& c = params.config;
  std::ostringstream hdr;
  hdr << kMagic << '\n'
      << "view_dim " << c.view_dim << '\n'
      << "n_views " << c.n_views << '\n'
      << "hidden_dim " << c.hidden_dim << '\n'
      << "word_embed_dim " << c.word_embed_dim << '\n'
      << "vocab_size " << c.vocab_size << '\n'
      << "n_classes " << c.n_classes << '\n'
      << "decoupled " << (params.decoupled() ? 1 : 0) << '\n'
      << "vocab " << vocab.size() << '\n';
  for (const std::string& tok : vocab) {
    if (tok.empty() || tok.find_first_of(" \t\r\n") != std::string::npos) {
      fail("checkpoint: vocabulary token '" + tok + "' cannot be stored");
    }
    hdr << tok << '\n';
  }
  const auto plist = params.parameters();
  hdr << "tensors " << plist.size() << '\n';
  for (const Parameter* p : plist) {
    hdr << p->name << ' ' << p->value.rank();
    for (int d : p->value.shape()) hdr << ' ' << d;
    hdr << '\n';
  }
  hdr << "end\n";
  const std::string h = hdr.str();
  os.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const Parameter* p : plist) write_payload(os, p->value);
  if (!os) fail_io("checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail_io("checkpoint: cannot open " + path);
  if (read_line(is) != kMagic) fail_io("checkpoint: " + path + " is not a y2seq checkpoint");
  ModelConfig c;
  c.view_dim = read_field(is, "view_dim");
  c.n_views = read_field(is, "n_views");
  c.hidden_dim = read_field(is, "hidden_dim");
  c.word_embed_dim = read_field(is, "word_embed_dim");
  c.vocab_size = read_field(is, "vocab_size");
  c.n_classes = read_field(is, "n_classes");
  const bool decoupled = read_field(is, "decoupled") != 0;
  const int n_vocab = read_field(is, "vocab");
  Checkpoint ck{ModelParams::zeros(c, decoupled), {}};
  for (int i = 0; i < n_vocab; ++i) ck.vocab.push_back(read_line(is));
  auto plist = ck.params.parameters();
  const int n_tensors = read_field(is, "tensors");
  if (n_tensors != static_cast<int>(plist.size())) {
    fail_io("checkpoint: manifest lists " + std::to_string(n_tensors) + " tensors, model has " +
            std::to_string(plist.size()));
  }
  for (Parameter* p : plist) {
    std::istringstream ls(read_line(is));
    std::string name;
    int rank = 0;
    ls >> name >> rank;
    std::vector<int> shape(static_cast<std::size_t>(std::max(rank, 0)));
    for (int& d : shape) ls >> d;
    if (!ls || name != p->name || shape != p->value.shape()) {
      fail_io("checkpoint: manifest entry '" + name + "' " + shape_str(shape) +
              " does not match expected '" + p->name + "' " + p->value.shape_str());
    }
  }
  if (read_line(is) != "end") fail_io("checkpoint: manifest not terminated");
  for (Parameter* p : plist) read_payload(is, p->value, p->name);
  if (is.peek() != std::char_traits<char>::eof()) fail_io("checkpoint: trailing bytes");
  return ck;
}

Checkpoint load_checkpoint(const std::string& path, const ModelConfig& expected) {
  Checkpoint ck = load_checkpoint(path);
  if (!(ck.params.config == expected)) {
    fail_config("checkpoint: " + path + " was saved with a different model configuration");
  }
  return ck;
}

Y2S_NAMESPACE_END

// Copyright 2026 The Metablock Authors.
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

#include "fixtures.h"

#include <atomic>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "metablock/io.h"

namespace metablock::testing {
namespace {

struct Row {
  const char *key;
  const char *brand;
  const char *model;
  const char *extra;
};

constexpr Row kFigure1[] = {
    {"e1", "Apple", "iPhone X", "64GB"},
    {"e2", "Samsung", "Galaxy S9", "black"},
    {"e3", "apple", "iphone x", "64 GB silver"},
    {"e4", "Samsung", "S9 Galaxy", "Black"},
    {"e5", "Nokia", "3310", "classic black"},
    {"e6", "Samsung", "Galaxy Note8", ""},
    {"e7", "samsung", "note8 Galaxy", "(refurbished)"},
};

}  // namespace

std::vector<EntityProfile> Figure1Profiles() {
  std::vector<EntityProfile> out;
  for (const Row &row : kFigure1) {
    EntityProfile p;
    p.id = static_cast<EntityId>(out.size());
    p.source = Source::kDirty;
    p.attributes = {{"brand", row.brand}, {"model", row.model}};
    if (*row.extra) p.attributes.push_back({"extra", row.extra});
    out.push_back(std::move(p));
  }
  return out;
}

GroundTruth Figure1GroundTruth() {
  GroundTruth gt(ErMode::kDirty, 7);
  gt.Add(0, 2);
  gt.Add(1, 3);
  gt.Add(5, 6);
  return gt;
}

std::string Figure1Csv() {
  std::string out = "id,brand,model,extra\n";
  for (const Row &row : kFigure1) {
    out += std::string(row.key) + "," + row.brand + "," + row.model + "," +
           row.extra + "\n";
  }
  return out;
}

std::string Figure1GroundTruthCsv() {
  return "left,right\ne1,e3\ne2,e4\ne6,e7\n";
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("metablock-test-" + std::to_string(rd()) + "-" +
           std::to_string(counter++));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::filesystem::path TempDir::Write(std::string_view name,
                                     std::string_view contents) const {
  const std::filesystem::path p = path_ / name;
  std::ofstream out(p, std::ios::binary);
  out << contents;
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return p;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LinkageFiles WriteLinkageFiles(const TempDir &dir,
                               const SyntheticLinkage &data) {
  auto text = [](const EntityProfile &p) {
    return p.attributes.empty() ? std::string() : p.attributes[0].value;
  };
  std::ostringstream e1, e2, gt, dirty, dirty_gt;
  e1 << "id,text\n";
  e2 << "id,text\n";
  dirty << "id,text\n";
  gt << "left,right\n";
  dirty_gt << "left,right\n";
  for (const EntityProfile &p : data.e1) {
    const std::string key = "a" + std::to_string(p.id);
    WriteCsvRow(e1, {key, text(p)});
    WriteCsvRow(dirty, {key, text(p)});
  }
  for (const EntityProfile &p : data.e2) {
    const std::string key = "b" + std::to_string(p.id);
    WriteCsvRow(e2, {key, text(p)});
    WriteCsvRow(dirty, {key, text(p)});
  }
  const auto n1 = static_cast<EntityId>(data.e1.size());
  for (std::uint64_t k : data.gt.SortedKeys()) {
    const auto [i, j] = UnpackPairKey(k);
    const std::string a = "a" + std::to_string(i);
    const std::string b = "b" + std::to_string(j - n1);
    gt << a << ',' << b << '\n';
    dirty_gt << b << ',' << a << '\n';
  }
  return {dir.Write("e1.csv", e1.str()), dir.Write("e2.csv", e2.str()),
          dir.Write("gt.csv", gt.str()), dir.Write("dirty.csv", dirty.str()),
          dir.Write("dirty_gt.csv", dirty_gt.str())};
}

}  // namespace metablock::testing

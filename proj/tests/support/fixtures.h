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

#ifndef METABLOCK_TESTS_SUPPORT_FIXTURES_H_
#define METABLOCK_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "generators.h"
#include "metablock/types.h"

namespace metablock::testing {

// Seven smartphone profiles in one collection (Dirty ER), ids e1..e7 mapped
// to 0..6. The duplicates are <e1,e3>, <e2,e4> and <e6,e7>; e2 and e6 share
// the "samsung" token without matching.
std::vector<EntityProfile> Figure1Profiles();
GroundTruth Figure1GroundTruth();
// The same records as CSV (key column "id", keys "e1".."e7") and the ground
// truth as two-column CSV.
std::string Figure1Csv();
std::string Figure1GroundTruthCsv();

// A fresh directory under the system temp path, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path Write(std::string_view name,
                              std::string_view contents) const;

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::filesystem::path &path);

// A synthetic linkage written as e1.csv, e2.csv and gt.csv (header id,text;
// keys a<k> and b<k>), plus dirty.csv and dirty_gt.csv holding both sources
// in one collection.
struct LinkageFiles {
  std::filesystem::path e1;
  std::filesystem::path e2;
  std::filesystem::path gt;
  std::filesystem::path dirty;
  std::filesystem::path dirty_gt;
};
LinkageFiles WriteLinkageFiles(const TempDir &dir,
                               const SyntheticLinkage &data);

}  // namespace metablock::testing

#endif  // METABLOCK_TESTS_SUPPORT_FIXTURES_H_

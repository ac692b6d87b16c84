/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

namespace okc {
namespace {

using testing::Gen;

template <class Model>
Model sample_model(std::uint64_t seed) {
    Gen g(seed);
    auto m = Model::fit(RegGramState::init(g.normal_matrix(40, 3), 10.0, KernelSpec{KernelKind::rbf, 1.3}), 0.1);
    m.slide(g.normal_matrix(10, 3));
    return m;
}

TEST(Snapshot, JsonRoundTripReproducesDecisions) {
    const auto m = sample_model<ReconstructionModel>(61);
    const auto j = to_json(snapshot(m));
    EXPECT_EQ(j.at("format"), "okc.model");
    EXPECT_EQ(j.at("version"), 1);
    EXPECT_EQ(j.at("framework"), "reconstruction");

    const auto restored = restore<ReconstructionFramework>(snapshot_from_json(nlohmann::json::parse(j.dump())));
    EXPECT_EQ(restored.theta(), m.theta());
    EXPECT_EQ(restored.state().window(), m.state().window());
    Gen g(62);
    const Matrix probes = g.normal_matrix(300, 3);
    EXPECT_LT((restored.score(probes) - m.score(probes)).cwiseAbs().maxCoeff(), 1e-8);
    const auto a = m.decide(probes);
    const auto b = restored.decide(probes);
    for (std::size_t i = 0; i < a.size(); ++i) { EXPECT_EQ(a[i].label, b[i].label); }
}

TEST(Snapshot, FileRoundTrip) {
    const auto m = sample_model<BoundaryModel>(63);
    const auto path = (std::filesystem::temp_directory_path() / "okc_snapshot_test.json").string();
    save_snapshot(snapshot(m), path);
    const auto s = load_snapshot(path);
    std::filesystem::remove(path);
    EXPECT_EQ(s.framework, Framework::boundary);
    EXPECT_EQ(s.kernel, m.state().kernel());
    EXPECT_EQ(s.lambda, 10.0);
    EXPECT_EQ(s.eta, 0.1);
    EXPECT_EQ(s.theta, m.theta());
    const auto restored = restore<BoundaryFramework>(s);
    EXPECT_EQ(restored.theta(), m.theta());
}

TEST(Snapshot, RejectsBrokenDocuments) {
    auto j = to_json(snapshot(sample_model<BoundaryModel>(64)));
    auto missing = j;
    missing.erase("theta");
    EXPECT_THROW(snapshot_from_json(missing), InvalidInputError);
    auto wrong_format = j;
    wrong_format["format"] = "something.else";
    EXPECT_THROW(snapshot_from_json(wrong_format), InvalidInputError);
    auto future = j;
    future["version"] = 2;
    EXPECT_THROW(snapshot_from_json(future), InvalidInputError);
    auto ragged = j;
    ragged["window"][1] = nlohmann::json::array({1.0});
    EXPECT_THROW(snapshot_from_json(ragged), DimensionError);
    auto typed = j;
    typed["lambda"] = "big";
    EXPECT_THROW(snapshot_from_json(typed), InvalidInputError);
    EXPECT_THROW(restore<ReconstructionFramework>(snapshot_from_json(j)), InvalidInputError);
    EXPECT_THROW(load_snapshot("/nonexistent/okc/model.json"), IoError);
}

}  // namespace
}  // namespace okc

// Shared test entry point: fails the run if any Kleene iterate decreased.
#include "phorslab/solver.hpp"

#include <gtest/gtest.h>

namespace {

class MonotoneKleene : public ::testing::Environment {
public:
    void TearDown() override
    {
        EXPECT_EQ(phorslab::monotonicity_stats().violations, 0u) << "a Kleene iterate decreased";
    }
};

}  // namespace

int main(int argc, char** argv)
{
    ::testing::InitGoogleTest(&argc, argv);
    ::testing::AddGlobalTestEnvironment(new MonotoneKleene);
    return RUN_ALL_TESTS();
}

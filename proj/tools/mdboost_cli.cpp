#include "mdboost/cli.hpp"

int main(int argc, char** argv)
{
    return mdboost::cli::dispatch(argc, argv);
}

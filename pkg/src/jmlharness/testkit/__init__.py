from .inputgen import generate_random_inputs
from .mutation import MutantPair, MutationConfig, UnmutableValue, build_mutant_pool, mutate_output
from .reference import CompileError, RuntimeCrash, Timeout, execute_reference
from .suite import MethodSignature, SuiteError, TestPair, TestSuite, dump_suite, load_suite, save_suite

__all__ = [
    "CompileError", "MethodSignature", "MutantPair", "MutationConfig", "RuntimeCrash", "SuiteError",
    "TestPair", "TestSuite", "Timeout", "UnmutableValue", "build_mutant_pool", "dump_suite",
    "execute_reference", "generate_random_inputs", "load_suite", "mutate_output", "save_suite",
]

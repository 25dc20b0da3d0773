import argparse
import dataclasses
import typing

from .common import CliContext
from .documentation import cli as documentation_cli
from .documentation import cli_args as documentation_args
from .evaluate import cli as evaluate_cli
from .evaluate import cli_args as evaluate_args
from .hard_mine import cli as hard_mine_cli
from .hard_mine import cli_args as hard_mine_args
from .infer import cli as infer_cli
from .infer import cli_args as infer_args
from .phantom_gen import cli as phantom_gen_cli
from .phantom_gen import cli_args as phantom_gen_args
from .postprocess import cli as postprocess_cli
from .postprocess import cli_args as postprocess_args
from .radiomics import cli as radiomics_cli
from .radiomics import cli_args as radiomics_args
from .schema import cli as schema_cli
from .schema import cli_args as schema_args
from .survival_predict import cli as survival_predict_cli
from .survival_predict import cli_args as survival_predict_args
from .survival_score import cli as survival_score_cli
from .survival_score import cli_args as survival_score_args
from .survival_train import cli as survival_train_cli
from .survival_train import cli_args as survival_train_args
from .train import cli as train_cli
from .train import cli_args as train_args


@dataclasses.dataclass
class Command:
    args: typing.Callable[[argparse.ArgumentParser], None]
    cli: typing.Callable[[typing.Any, CliContext], bool]
    help: typing.Optional[str] = dataclasses.field(default=None)


@dataclasses.dataclass
class Menu:
    options: typing.Mapping[str, typing.Union[Command, "Menu"]] = dataclasses.field(
        default_factory=dict
    )
    help: typing.Optional[str] = dataclasses.field(default=None)


CLI = Menu(
    help="Main",
    options={
        "phantom-gen": Command(
            help="Generate synthetic subjects",
            args=phantom_gen_args,
            cli=phantom_gen_cli,
        ),
        "train": Command(help="Train the network", args=train_args, cli=train_cli),
        "hard-mine": Command(
            help="Fine-tune on poorly segmented subjects",
            args=hard_mine_args,
            cli=hard_mine_cli,
        ),
        "infer": Command(
            help="Predict class probabilities", args=infer_args, cli=infer_cli
        ),
        "postprocess": Command(
            help="CRF smoothing and component filtering",
            args=postprocess_args,
            cli=postprocess_cli,
        ),
        "evaluate": Command(
            help="Segmentation metrics", args=evaluate_args, cli=evaluate_cli
        ),
        "radiomics": Command(
            help="Extract radiomic features", args=radiomics_args, cli=radiomics_cli
        ),
        "survival-train": Command(
            help="Fit the survival model",
            args=survival_train_args,
            cli=survival_train_cli,
        ),
        "survival-predict": Command(
            help="Predict survival days",
            args=survival_predict_args,
            cli=survival_predict_cli,
        ),
        "survival-score": Command(
            help="Score survival predictions",
            args=survival_score_args,
            cli=survival_score_cli,
        ),
        "doc": Command(
            help="Build the config JSON schema",
            args=documentation_args,
            cli=documentation_cli,
        ),
        "config": Command(
            help="Validate and print the resolved config",
            args=schema_args,
            cli=schema_cli,
        ),
    },
)

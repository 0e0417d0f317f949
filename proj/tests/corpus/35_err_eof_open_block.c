#ifdef CONFIG_A
int a;
